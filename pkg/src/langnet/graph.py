"""Undirected language networks induced from neighbour tables."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .neighbors import NeighborTable


class UndirectedGraph:
    """Simple undirected graph with symmetric CSR adjacency.

    Nodes are ``0..n_nodes-1``. ``node_ids`` maps each node back to its row
    in the embedding matrix and ``labels`` holds the word, when known.
    """

    def __init__(self, n_nodes: int, indptr: np.ndarray, indices: np.ndarray,
                 node_ids: np.ndarray | None = None, labels: Sequence[str] | None = None):
        self.n_nodes = int(n_nodes)
        self.indptr = indptr
        self.indices = indices
        self.node_ids = np.arange(self.n_nodes) if node_ids is None else np.asarray(node_ids, dtype=np.int64)
        self.labels = tuple(labels) if labels is not None else None
        if len(self.node_ids) != self.n_nodes:
            raise ValueError("node_ids length does not match n_nodes")
        if self.labels is not None and len(self.labels) != self.n_nodes:
            raise ValueError("labels length does not match n_nodes")
        for arr in (self.indptr, self.indices, self.node_ids):
            arr.setflags(write=False)

    @classmethod
    def from_edges(cls, n_nodes: int, u, v, node_ids=None, labels=None) -> "UndirectedGraph":
        """Build from endpoint arrays; drops self-loops and repeated pairs."""
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        if u.shape != v.shape:
            raise ValueError("endpoint arrays differ in length")
        if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n_nodes):
            raise ValueError("edge endpoint out of range")
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        mask = lo != hi
        codes = np.unique(lo[mask] * n_nodes + hi[mask])
        lo, hi = codes // n_nodes, codes % n_nodes
        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        indptr = np.zeros(n_nodes + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n_nodes), out=indptr[1:])
        return cls(n_nodes, indptr, cols.astype(np.int64), node_ids, labels)

    @classmethod
    def from_scipy(cls, A, labels=None) -> "UndirectedGraph":
        A = sp.coo_matrix(A)
        if A.shape[0] != A.shape[1]:
            raise ValueError("adjacency matrix must be square")
        nz = A.data != 0
        return cls.from_edges(A.shape[0], A.row[nz], A.col[nz], labels=labels)

    @property
    def n_edges(self) -> int:
        return len(self.indices) // 2

    def __len__(self) -> int:
        return self.n_nodes

    def __repr__(self) -> str:
        return f"UndirectedGraph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        pos = np.searchsorted(nb, v)
        return bool(pos < len(nb) and nb[pos] == v)

    def edge_array(self) -> np.ndarray:
        """Edges as an ``(m, 2)`` array with ``u < v``, sorted by ``(u, v)``."""
        rows = np.repeat(np.arange(self.n_nodes), self.degrees())
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    def adjacency(self) -> sp.csr_matrix:
        data = np.ones(len(self.indices), dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n_nodes, self.n_nodes))

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(int(self.node_ids[i]))

    def subgraph(self, nodes) -> "UndirectedGraph":
        """Induced subgraph; nodes are renumbered in ascending order."""
        nodes = np.unique(np.asarray(nodes, dtype=np.int64))
        remap = np.full(self.n_nodes, -1, dtype=np.int64)
        remap[nodes] = np.arange(len(nodes))
        edges = self.edge_array()
        keep = (remap[edges[:, 0]] >= 0) & (remap[edges[:, 1]] >= 0)
        e = remap[edges[keep]]
        labels = [self.labels[i] for i in nodes] if self.labels is not None else None
        return UndirectedGraph.from_edges(len(nodes), e[:, 0], e[:, 1],
                                          node_ids=self.node_ids[nodes], labels=labels)

    def relabel(self, perm) -> "UndirectedGraph":
        """Graph with node ``i`` renamed to ``perm[i]``."""
        perm = np.asarray(perm, dtype=np.int64)
        edges = self.edge_array()
        inv = np.argsort(perm)
        labels = [self.labels[i] for i in inv] if self.labels is not None else None
        return UndirectedGraph.from_edges(self.n_nodes, perm[edges[:, 0]], perm[edges[:, 1]],
                                          node_ids=self.node_ids[inv], labels=labels)


@dataclass(frozen=True, eq=False)
class ComponentLabeling:
    """Component id per node; id 0 is the largest component."""

    labels: np.ndarray
    sizes: np.ndarray

    @property
    def n_components(self) -> int:
        return len(self.sizes)

    def giant_fraction(self) -> float:
        return float(self.sizes[0] / self.labels.size) if self.labels.size else 0.0


def _table_labels(nt: NeighborTable, node_ids):
    if nt.tokens is None:
        return None
    return [nt.tokens[i] for i in node_ids]


def induce_knn_graph(nt: NeighborTable) -> UndirectedGraph:
    """Union of every node's k-NN links, with direction dropped."""
    if nt.mode != "knn":
        raise ValueError("induce_knn_graph needs a k-NN table")
    if not nt.covers_all:
        raise ValueError("table does not cover every node; use induce_ego_graph")
    u = np.repeat(nt.queries, nt.counts)
    n = nt.n_points
    return UndirectedGraph.from_edges(n, u, nt.indices, labels=_table_labels(nt, range(n)))


def induce_proximity_graph(nt: NeighborTable) -> UndirectedGraph:
    """Every pair closer than the table radius."""
    if nt.mode != "radius":
        raise ValueError("induce_proximity_graph needs a radius table")
    if not nt.covers_all:
        raise ValueError("radius table must cover every node")
    u = np.repeat(nt.queries, nt.counts)
    n = nt.n_points
    return UndirectedGraph.from_edges(n, u, nt.indices, labels=_table_labels(nt, range(n)))


def induce_ego_graph(nt: NeighborTable) -> UndirectedGraph:
    """Graph on the queries plus every neighbour they reach.

    Only query-to-neighbour links become edges. Neighbours that are not
    queries themselves are full nodes but get no links of their own.
    """
    u = np.repeat(nt.queries, nt.counts)
    v = nt.indices
    node_ids = np.unique(np.concatenate([nt.queries, v]))
    remap = np.full(nt.n_points, -1, dtype=np.int64)
    remap[node_ids] = np.arange(len(node_ids))
    return UndirectedGraph.from_edges(len(node_ids), remap[u], remap[v], node_ids=node_ids,
                                      labels=_table_labels(nt, node_ids))


def components(g: UndirectedGraph) -> ComponentLabeling:
    if g.n_nodes == 0:
        return ComponentLabeling(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))
    _, raw = connected_components(g.adjacency(), directed=False)
    sizes = np.bincount(raw)
    first = np.full(len(sizes), g.n_nodes, dtype=np.int64)
    np.minimum.at(first, raw, np.arange(g.n_nodes))
    # largest first; equal sizes ordered by their smallest node
    order = np.lexsort((first, -sizes))
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    return ComponentLabeling(rank[raw].astype(np.int64), sizes[order].astype(np.int64))


def giant_component(g: UndirectedGraph) -> UndirectedGraph:
    if g.n_nodes == 0:
        raise ValueError("empty graph has no giant component")
    comp = components(g)
    if comp.n_components == 1:
        return g
    return g.subgraph(np.nonzero(comp.labels == 0)[0])


def write_edge_list(g: UndirectedGraph, path) -> None:
    """TSV with one ``token_u<TAB>token_v`` line per edge, ``u < v``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for u, v in g.edge_array():
            fh.write(f"{g.label(u)}\t{g.label(v)}\n")


def read_edge_list(path) -> UndirectedGraph:
    """Inverse of :func:`write_edge_list`.

    Nodes are numbered in order of first appearance; isolated nodes are not
    representable in this format.
    """
    index: dict[str, int] = {}
    us, vs = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 2 tab-separated tokens")
            a, b = (index.setdefault(tok, len(index)) for tok in parts)
            us.append(a)
            vs.append(b)
    labels = list(index)
    return UndirectedGraph.from_edges(len(labels), us, vs, labels=labels)
