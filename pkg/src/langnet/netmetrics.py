"""Network statistics for induced language graphs.

Clustering is the average local (Watts-Strogatz) coefficient. Path lengths
are unweighted BFS distances; the sampled estimator averages over a seeded
subset of sources. The degree exponent is a discrete power-law maximum
likelihood fit reported with a negative sign (``gamma = -alpha``).
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import shortest_path

from .community import louvain
from .embedding_store import EmbeddingMatrix
from .graph import (
    UndirectedGraph,
    components,
    giant_component,
    induce_knn_graph,
    induce_proximity_graph,
)
from .neighbors import knn_all, radius_all

DEFAULT_PATH_SOURCES = 1000
EXACT_PATH_LIMIT = 2000
_BFS_CHUNK = 256


def local_clustering(g: UndirectedGraph) -> np.ndarray:
    A = g.adjacency()
    triangles = np.asarray((A @ A).multiply(A).sum(axis=1)).ravel() / 2.0
    deg = g.degrees().astype(np.float64)
    pairs = deg * (deg - 1) / 2.0
    out = np.zeros(g.n_nodes)
    np.divide(triangles, pairs, out=out, where=deg >= 2)
    return out


def clustering_coefficient(g: UndirectedGraph) -> float:
    """Mean local clustering; nodes with degree below 2 count as 0."""
    if g.n_nodes == 0:
        raise ValueError("clustering coefficient of an empty graph")
    return float(local_clustering(g).mean())


def _distance_sum(g: UndirectedGraph, sources: np.ndarray) -> int:
    A = g.adjacency()
    total = 0
    for s in range(0, len(sources), _BFS_CHUNK):
        dist = shortest_path(A, method="D", directed=False, unweighted=True,
                             indices=sources[s:s + _BFS_CHUNK])
        if not np.all(np.isfinite(dist)):
            raise ValueError("graph is disconnected; pass its giant component")
        total += int(dist.sum(dtype=np.float64))
    return total


def average_path_length_exact(g: UndirectedGraph) -> float:
    """Mean shortest-path length over all node pairs of a connected graph."""
    n = g.n_nodes
    if n < 2:
        raise ValueError("path length needs at least two nodes")
    return _distance_sum(g, np.arange(n)) / (n * (n - 1))


def average_path_length_sampled(g: UndirectedGraph, sources: int = DEFAULT_PATH_SOURCES,
                                seed: int = 0) -> float:
    """Mean BFS distance from ``sources`` random nodes to all others."""
    n = g.n_nodes
    if n < 2:
        raise ValueError("path length needs at least two nodes")
    if not 1 <= sources <= n:
        raise ValueError(f"sources must be in [1, {n}], got {sources}")
    rng = np.random.default_rng(seed)
    picked = np.sort(rng.choice(n, size=sources, replace=False))
    return _distance_sum(g, picked) / (sources * (n - 1))


def average_path_length(g: UndirectedGraph, sources: int = DEFAULT_PATH_SOURCES,
                        seed: int = 0) -> tuple[float, bool]:
    """Exact when the graph is small, sampled otherwise; second item flags an estimate."""
    if g.n_nodes <= EXACT_PATH_LIMIT or sources >= g.n_nodes:
        return average_path_length_exact(g), False
    return average_path_length_sampled(g, sources, seed), True


def degree_distribution(g: UndirectedGraph) -> dict[int, int]:
    counts = np.bincount(g.degrees())
    return {int(d): int(c) for d, c in enumerate(counts) if c}


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float
    x_min: int
    n_tail: int

    @property
    def gamma(self) -> float:
        return -self.alpha


def fit_power_law(hist, x_min: int) -> PowerLawFit:
    """Discrete MLE, ``alpha = 1 + N / sum(ln(d / (x_min - 1/2)))`` over ``d >= x_min``.

    ``hist`` is either a degree -> count mapping or a raw sample of degrees.
    """
    if x_min < 1:
        raise ValueError("x_min must be at least 1")
    if isinstance(hist, dict):
        degs = np.array(list(hist.keys()), dtype=np.float64)
        cnts = np.array(list(hist.values()), dtype=np.float64)
    else:
        degs, cnts = np.unique(np.asarray(hist), return_counts=True)
        degs = degs.astype(np.float64)
        cnts = cnts.astype(np.float64)
    tail = degs >= x_min
    if np.count_nonzero(tail) < 2:
        raise ValueError("power-law fit needs at least two distinct values >= x_min")
    n_tail = cnts[tail].sum()
    log_sum = float(np.sum(cnts[tail] * np.log(degs[tail] / (x_min - 0.5))))
    return PowerLawFit(alpha=1.0 + n_tail / log_sum, x_min=int(x_min), n_tail=int(n_tail))


def power_law_exponent(hist, x_min: int) -> float:
    """Fitted exponent with the sign convention of a decaying slope (negative)."""
    return fit_power_law(hist, x_min).gamma


def random_graph(n: int, m: int, seed: int = 0) -> UndirectedGraph:
    """Uniform random simple graph with exactly ``m`` edges, G(n, m)."""
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise ValueError(f"m must be in [0, {total}], got {m}")
    rng = np.random.default_rng(seed)
    codes = rng.choice(total, size=m, replace=False) if m < total else np.arange(total)
    # codes enumerate pairs (u, v), u < v, row by row
    rows = np.arange(n, dtype=np.int64)
    starts = rows * (2 * n - rows - 1) // 2
    u = np.searchsorted(starts, codes, side="right") - 1
    v = codes - starts[u] + u + 1
    return UndirectedGraph.from_edges(n, u, v)


def er_baseline(n: int, m: int, sources: int = DEFAULT_PATH_SOURCES, seed: int = 0) -> tuple[float, float]:
    """(C_random, pl_random) for a random graph matching ``n`` and ``m``.

    C_random is the closed form ``2m / (n(n-1))``; pl_random is measured on
    one generated G(n, m) (its giant component when disconnected).
    """
    if n < 2:
        raise ValueError("baseline needs at least two nodes")
    c_random = 2.0 * m / (n * (n - 1))
    if m == 0:
        return c_random, float("nan")
    gcc = giant_component(random_graph(n, m, seed))
    if gcc.n_nodes < 2:
        return c_random, float("nan")
    src = min(sources, gcc.n_nodes)
    return c_random, average_path_length_sampled(gcc, src, seed)


def pagerank(g: UndirectedGraph, damping: float = 0.85, tol: float = 1e-10,
             max_iter: int = 200) -> np.ndarray:
    """Power-iteration PageRank; every edge is a link in both directions.

    Isolated nodes spread their mass uniformly.
    """
    if not 0 < damping < 1:
        raise ValueError("damping must lie in (0, 1)")
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = g.n_nodes
    if n == 0:
        return np.empty(0)
    deg = g.degrees().astype(np.float64)
    inv = np.divide(1.0, deg, out=np.zeros(n), where=deg > 0)
    P = (g.adjacency() @ sp.diags(inv)).tocsr()  # column-stochastic
    dangling = deg == 0
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = damping * (P @ x) + (damping * x[dangling].sum() + 1.0 - damping) / n
        nxt /= nxt.sum()
        delta = np.abs(nxt - x).sum()
        x = nxt
        if delta < tol:
            break
    return x


@dataclass
class MetricsReport:
    n: int
    m: int
    num_components: int
    gcc_fraction: float
    clustering_coefficient: float
    c_random: float
    avg_path_length: float
    pl_estimated: bool
    pl_random: float
    gamma: float
    alpha: float
    x_min: int
    degree_histogram: dict[int, int] = field(default_factory=dict)

    _KEYS = ("n", "m", "num_components", "gcc_fraction", "clustering_coefficient",
             "c_random", "avg_path_length", "pl_estimated", "pl_random", "gamma",
             "alpha", "x_min")

    def to_dict(self, with_histogram: bool = False) -> dict:
        d = asdict(self)
        out = {k: d[k] for k in self._KEYS}
        for k, v in out.items():
            if isinstance(v, float) and not math.isfinite(v):
                out[k] = None
        if with_histogram:
            out["degree_histogram"] = {str(k): v for k, v in self.degree_histogram.items()}
        return out

    def to_json(self, with_histogram: bool = False) -> str:
        return json.dumps(self.to_dict(with_histogram), indent=2, sort_keys=False)


def network_report(g: UndirectedGraph, x_min: int | None = None,
                   path_sources: int = DEFAULT_PATH_SOURCES, seed: int = 0) -> MetricsReport:
    """All table-level statistics for one graph.

    Path lengths (observed and random) are measured on the giant component,
    and the random baseline is matched to the giant component's size.
    """
    if g.n_nodes == 0:
        raise ValueError("empty graph")
    comp = components(g)
    gcc = giant_component(g)
    hist = degree_distribution(g)
    if x_min is None:
        positive = [d for d in hist if d > 0]
        x_min = min(positive) if positive else 1
    try:
        fit = fit_power_law(hist, x_min)
        alpha, gamma = fit.alpha, fit.gamma
    except ValueError:
        alpha = gamma = float("nan")
    if gcc.n_nodes >= 2:
        pl, estimated = average_path_length(gcc, path_sources, seed)
        c_rand, pl_rand = er_baseline(gcc.n_nodes, gcc.n_edges, path_sources, seed)
    else:
        pl, estimated, pl_rand = float("nan"), False, float("nan")
        c_rand = 0.0
    return MetricsReport(
        n=g.n_nodes,
        m=g.n_edges,
        num_components=comp.n_components,
        gcc_fraction=comp.giant_fraction(),
        clustering_coefficient=clustering_coefficient(g),
        c_random=c_rand,
        avg_path_length=pl,
        pl_estimated=estimated,
        pl_random=pl_rand,
        gamma=gamma,
        alpha=alpha,
        x_min=int(x_min),
        degree_histogram=hist,
    )


@dataclass
class SweepCurve:
    """Graph statistics over an increasing list of k or d values."""

    kind: str  # "k" or "d"
    params: list
    edges: list = field(default_factory=list)
    components: list = field(default_factory=list)
    gcc_fraction: list = field(default_factory=list)
    clustering: list = field(default_factory=list)
    modularity: list = field(default_factory=list)

    def rows(self):
        return zip(self.params, self.edges, self.components, self.gcc_fraction,
                   self.clustering, self.modularity)

    def to_tsv(self) -> str:
        lines = ["param\tedges\tcomponents\tgcc_fraction\tclustering\tmodularity"]
        for p, e, c, f, cc, q in self.rows():
            lines.append(f"{p!r}\t{e}\t{c}\t{f!r}\t{cc!r}\t{q!r}")
        return "\n".join(lines) + "\n"

    def _add(self, g: UndirectedGraph, louvain_seed: int):
        comp = components(g)
        self.edges.append(g.n_edges)
        self.components.append(comp.n_components)
        self.gcc_fraction.append(comp.giant_fraction())
        self.clustering.append(clustering_coefficient(g))
        self.modularity.append(louvain(g, louvain_seed).modularity if g.n_edges else float("nan"))


def _check_increasing(values, name):
    values = list(values)
    if not values:
        raise ValueError(f"{name} is empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} must be strictly increasing")
    return values


def sweep_knn(m: EmbeddingMatrix, ks, louvain_seed: int = 0, n_jobs: int = 1) -> SweepCurve:
    """k-NN graph statistics for each k, from one search at ``max(ks)``."""
    ks = [int(k) for k in _check_increasing(ks, "ks")]
    table = knn_all(m, ks[-1], n_jobs=n_jobs)
    curve = SweepCurve("k", ks)
    for k in ks:
        curve._add(induce_knn_graph(table.truncate(k)), louvain_seed)
    return curve


def sweep_proximity(m: EmbeddingMatrix, ds, louvain_seed: int = 0, n_jobs: int = 1) -> SweepCurve:
    """Proximity graph statistics for each threshold, from one search at ``max(ds)``."""
    ds = [float(d) for d in _check_increasing(ds, "ds")]
    if ds[0] <= 0:
        raise ValueError("thresholds must be positive")
    table = radius_all(m, ds[-1], n_jobs=n_jobs)
    curve = SweepCurve("d", ds)
    for d in ds:
        curve._add(induce_proximity_graph(table.within(d)), louvain_seed)
    return curve
