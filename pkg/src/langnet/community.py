"""Modularity, Louvain community detection and partition comparison."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .graph import UndirectedGraph


@dataclass(frozen=True, eq=False)
class Partition:
    """Community id per node, dense and numbered by descending size.

    ``trace`` holds the modularity after each Louvain level, when the
    partition came from :func:`louvain`.
    """

    assignment: np.ndarray
    modularity: float = float("nan")
    trace: tuple[float, ...] = field(default=())

    @property
    def n_communities(self) -> int:
        return int(self.assignment.max()) + 1 if self.assignment.size else 0

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment)


def canonical_labels(assignment) -> np.ndarray:
    """Renumber communities 0..c-1 by descending size, ties by smallest member."""
    a = np.asarray(assignment)
    uniq, inv = np.unique(a, return_inverse=True)
    sizes = np.bincount(inv)
    first = np.full(len(uniq), len(a), dtype=np.int64)
    np.minimum.at(first, inv, np.arange(len(a)))
    order = np.lexsort((first, -sizes))
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    return rank[inv].astype(np.int64)


def modularity(g: UndirectedGraph, assignment) -> float:
    """Newman modularity of a node partition of an unweighted graph."""
    m = g.n_edges
    if m == 0:
        raise ValueError("modularity is undefined on a graph without edges")
    labels = np.asarray(assignment)
    if labels.shape != (g.n_nodes,):
        raise ValueError(f"assignment has shape {labels.shape}, expected ({g.n_nodes},)")
    _, labels = np.unique(labels, return_inverse=True)
    c = labels.max() + 1
    edges = g.edge_array()
    same = labels[edges[:, 0]] == labels[edges[:, 1]]
    intra = np.bincount(labels[edges[same, 0]], minlength=c)
    degree_sum = np.bincount(labels, weights=g.degrees(), minlength=c)
    return float(np.sum(intra / m - (degree_sum / (2.0 * m)) ** 2))


def _local_moving(adj, degree, m2, rng):
    """One Louvain level. Returns (community per node, moved anything).

    Works through a queue seeded with a shuffled pass over all nodes; a move
    re-queues the mover's neighbours outside its new community. Once the
    queue drains, a full shuffled pass confirms no node has a positive move.
    """
    n = len(adj)
    comm = list(range(n))
    tot = list(degree)
    moved_any = False
    while True:
        queue = deque(rng.permutation(n).tolist())
        pop, push = queue.popleft, queue.append
        queued = [True] * n
        moved = 0
        while queue:
            i = pop()
            queued[i] = False
            ci = comm[i]
            ki = degree[i]
            links: dict[int, int] = {}
            get = links.get
            for j, w in adj[i].items():
                c = comm[j]
                links[c] = get(c, 0) + w
            tot[ci] -= ki
            # gain of joining c, times 2m: 2m * k_i,c - tot_c * k_i  (integers)
            best = ci
            best_gain = get(ci, 0) * m2 - tot[ci] * ki
            for c, w in links.items():
                gain = w * m2 - tot[c] * ki
                if gain > best_gain:
                    best, best_gain = c, gain
                elif gain == best_gain and best != ci and c < best:
                    best = c
            tot[best] += ki
            if best != ci:
                comm[i] = best
                moved += 1
                for j in adj[i]:
                    if not queued[j] and comm[j] != best:
                        queued[j] = True
                        push(j)
        if not moved:
            return comm, moved_any
        moved_any = True


def _aggregate(adj, self_loops, comm):
    uniq = {c: i for i, c in enumerate(sorted(set(comm)))}
    new_n = len(uniq)
    new_adj: list[dict[int, int]] = [dict() for _ in range(new_n)]
    new_loops = [0] * new_n
    for i, nbrs in enumerate(adj):
        ci = uniq[comm[i]]
        new_loops[ci] += self_loops[i]
        row = new_adj[ci]
        for j, w in nbrs.items():
            cj = uniq[comm[j]]
            if cj == ci:
                # each internal edge is seen from both ends
                new_loops[ci] += w
            else:
                row[cj] = row.get(cj, 0) + w
    mapping = [uniq[c] for c in comm]
    return new_adj, new_loops, mapping


def louvain(g: UndirectedGraph, seed: int = 0) -> Partition:
    """Greedy two-phase modularity maximisation.

    Each level moves single nodes to the neighbouring community with the
    largest positive modularity gain (visit order reshuffled from ``seed``
    every pass, ties to the smaller community id), then contracts
    communities into weighted super-nodes. Stops when a level moves nothing.
    """
    if g.n_edges == 0:
        raise ValueError("louvain needs a graph with at least one edge")
    rng = np.random.default_rng(seed)
    indptr, indices = g.indptr.tolist(), g.indices.tolist()
    adj = [{j: 1 for j in indices[indptr[i]:indptr[i + 1]]} for i in range(g.n_nodes)]
    self_loops = [0] * g.n_nodes  # stores twice the loop weight
    m2 = 2 * g.n_edges
    node_comm = np.arange(g.n_nodes)
    trace = []

    while True:
        degree = [sum(nb.values()) + self_loops[i] for i, nb in enumerate(adj)]
        comm, moved = _local_moving(adj, degree, m2, rng)
        if not moved:
            break
        adj, self_loops, mapping = _aggregate(adj, self_loops, comm)
        node_comm = np.asarray(mapping, dtype=np.int64)[node_comm]
        trace.append(modularity(g, node_comm))
        if len(adj) == 1:
            break

    labels = canonical_labels(node_comm)
    return Partition(labels, modularity(g, labels), tuple(trace))


def _entropy(counts: np.ndarray) -> float:
    p = counts[counts > 0] / counts.sum()
    return float(-np.sum(p * np.log(p)))


def compare_partitions(a, b) -> float:
    """Normalised mutual information, arithmetic-mean normalisation.

    Two single-community partitions score 1.
    """
    a = np.asarray(getattr(a, "assignment", a))
    b = np.asarray(getattr(b, "assignment", b))
    if a.shape != b.shape:
        raise ValueError(f"partitions cover different node sets ({a.shape} vs {b.shape})")
    _, a = np.unique(a, return_inverse=True)
    _, b = np.unique(b, return_inverse=True)
    n = a.size
    joint = np.zeros((a.max() + 1, b.max() + 1))
    np.add.at(joint, (a, b), 1)
    ha = _entropy(joint.sum(axis=1))
    hb = _entropy(joint.sum(axis=0))
    nonzero = joint > 0
    if np.all(nonzero.sum(axis=0) == 1) and np.all(nonzero.sum(axis=1) == 1):
        # same partition up to relabelling, including the both-trivial case
        return 1.0
    pij = joint / n
    outer = np.outer(pij.sum(axis=1), pij.sum(axis=0))
    nz = pij > 0
    mi = float(np.sum(pij[nz] * np.log(pij[nz] / outer[nz])))
    return float(min(1.0, max(0.0, 2.0 * mi / (ha + hb))))


def write_partition(g: UndirectedGraph, p: Partition, path) -> None:
    """TSV ``token<TAB>community_id``, ids renumbered by descending size."""
    labels = canonical_labels(p.assignment)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("token\tcommunity_id\n")
        for i, c in enumerate(labels):
            fh.write(f"{g.label(i)}\t{c}\n")
