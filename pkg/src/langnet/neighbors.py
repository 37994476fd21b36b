"""Exact Euclidean neighbour search.

All reported distances come from one summation kernel
(:func:`squared_distances_paired`), which adds squared coordinate
differences left to right. The blocked search only uses the faster
``|a|^2 + |b|^2 - 2 a.b`` expansion to shortlist candidates, with a margin
wide enough to cover its rounding error, and then re-ranks the shortlist
with the kernel. Output is therefore independent of block size, thread
count and BLAS, and identical to :func:`knn_oracle`.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .embedding_store import EmbeddingMatrix

DEFAULT_BLOCK = 512
_UNIT_ROUNDOFF = np.finfo(np.float64).eps / 2


def squared_distances_paired(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Row-wise squared distances between ``A[i]`` and ``B[i]``.

    Coordinates are accumulated strictly in order, so the value for a pair
    does not depend on how many other pairs are computed alongside it.
    """
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    diff = A - B
    sq = diff * diff
    acc = sq[:, 0].copy()
    for j in range(1, sq.shape[1]):
        acc += sq[:, j]
    return acc


def euclidean_distance(x, y) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    if x.size == 0:
        return 0.0
    return math.sqrt(float(squared_distances_paired(x, y)[0]))


@dataclass(frozen=True, eq=False)
class NeighborTable:
    """Per-query neighbour lists in CSR layout.

    ``indices[indptr[q]:indptr[q + 1]]`` are the neighbours of
    ``queries[q]``, ascending by distance and then by index.
    """

    queries: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    distances: np.ndarray
    mode: str  # "knn" or "radius"
    param: float
    n_points: int
    tokens: tuple[str, ...] | None = None

    def __len__(self) -> int:
        return len(self.queries)

    def neighbors_of(self, q: int) -> tuple[np.ndarray, np.ndarray]:
        """Neighbour indices and distances for the ``q``-th query row."""
        lo, hi = self.indptr[q], self.indptr[q + 1]
        return self.indices[lo:hi], self.distances[lo:hi]

    @property
    def counts(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def covers_all(self) -> bool:
        return len(self.queries) == self.n_points and bool(
            np.array_equal(self.queries, np.arange(self.n_points))
        )

    def as_lists(self) -> list[list[tuple[int, float]]]:
        out = []
        for q in range(len(self.queries)):
            idx, dist = self.neighbors_of(q)
            out.append(list(zip(idx.tolist(), dist.tolist())))
        return out

    def truncate(self, k: int) -> "NeighborTable":
        """The table for a smaller ``k``: each list cut to its first ``k``."""
        if self.mode != "knn":
            raise ValueError("truncate applies to k-NN tables")
        if k < 1 or k > self.param:
            raise ValueError(f"k={k} outside [1, {int(self.param)}]")
        counts = np.minimum(self.counts, k)
        keep = _prefix_mask(self.indptr, counts)
        return NeighborTable(
            self.queries, _indptr_from_counts(counts), self.indices[keep],
            self.distances[keep], "knn", k, self.n_points, self.tokens,
        )

    def within(self, d: float) -> "NeighborTable":
        """Restrict a table to neighbours at distance strictly below ``d``."""
        if self.mode == "radius" and d > self.param:
            raise ValueError(f"d={d} exceeds the table radius {self.param}")
        keep = self.distances < d
        rows = np.repeat(np.arange(len(self.queries)), self.counts)
        counts = np.bincount(rows[keep], minlength=len(self.queries))
        return NeighborTable(
            self.queries, _indptr_from_counts(counts), self.indices[keep],
            self.distances[keep], "radius", d, self.n_points, self.tokens,
        )

    def equals(self, other: "NeighborTable") -> bool:
        return (
            self.mode == other.mode
            and self.param == other.param
            and self.n_points == other.n_points
            and np.array_equal(self.queries, other.queries)
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.distances, other.distances)
        )


def _indptr_from_counts(counts) -> np.ndarray:
    indptr = np.zeros(len(counts) + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr


def _prefix_mask(indptr, counts) -> np.ndarray:
    total = int(indptr[-1])
    pos = np.arange(total) - np.repeat(indptr[:-1], np.diff(indptr))
    return pos < np.repeat(counts, np.diff(indptr))


def _as_array(m) -> tuple[np.ndarray, tuple[str, ...] | None]:
    if isinstance(m, EmbeddingMatrix):
        return m.vectors, m.tokens
    X = np.asarray(m, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {X.shape}")
    return X, None


def _check_queries(queries, n: int) -> np.ndarray:
    q = np.asarray(queries, dtype=np.int64).ravel()
    if q.size and (q.min() < 0 or q.max() >= n):
        bad = q[(q < 0) | (q >= n)][0]
        raise IndexError(f"query index {bad} outside [0, {n})")
    return q


def _shortlist_margin(X: np.ndarray, sq_norms: np.ndarray, rows: np.ndarray) -> np.ndarray:
    # Bound on |gram-expansion estimate - summed distance| for every pair in
    # the row; generous constant, the shortlist is re-ranked exactly anyway.
    dim = X.shape[1]
    scale = sq_norms[rows] + sq_norms.max()
    return 4.0 * (dim + 4) * _UNIT_ROUNDOFF * scale


def _rank_exact(X, qidx, rows, cols) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # rows are positions within the block, qidx maps them to matrix rows
    sq = squared_distances_paired(X[qidx[rows]], X[cols])
    order = np.lexsort((cols, sq, rows))
    return rows[order], cols[order], sq[order]


def _knn_block(X, sq_norms, qidx, k):
    """k nearest for one block of query indices; returns (idx, sq) of shape (b, k)."""
    b = len(qidx)
    approx = sq_norms[qidx, None] + sq_norms[None, :] - 2.0 * (X[qidx] @ X.T)
    approx[np.arange(b), qidx] = np.inf
    kth = np.partition(approx, k - 1, axis=1)[:, k - 1]
    margin = _shortlist_margin(X, sq_norms, qidx)
    rows, cols = np.nonzero(approx <= (kth + 2.0 * margin)[:, None])
    rows, cols, sq = _rank_exact(X, qidx, rows, cols)
    # rows are block-local and sorted; keep the first k of each
    starts = np.searchsorted(rows, np.arange(b))
    pos = np.arange(len(rows)) - starts[rows]
    keep = pos < k
    return cols[keep].reshape(b, k), sq[keep].reshape(b, k)


def _run_blocks(fn, qidx: np.ndarray, block: int, n_jobs: int):
    chunks = [qidx[s:s + block] for s in range(0, len(qidx), block)]
    if n_jobs is None or n_jobs == 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    workers = n_jobs if n_jobs > 0 else None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map preserves chunk order, so merging is schedule independent
        return list(pool.map(fn, chunks))


def _knn_search(m, queries, k: int, block: int, n_jobs: int) -> NeighborTable:
    X, tokens = _as_array(m)
    n = X.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")
    qidx = _check_queries(queries, n)
    sq_norms = squared_distances_paired(X, np.zeros_like(X))

    parts = _run_blocks(lambda c: _knn_block(X, sq_norms, c, k), qidx, block, n_jobs)
    if parts:
        idx = np.concatenate([p[0] for p in parts])
        sq = np.concatenate([p[1] for p in parts])
    else:
        idx = np.empty((0, k), dtype=np.int64)
        sq = np.empty((0, k))
    return NeighborTable(
        queries=qidx,
        indptr=np.arange(len(qidx) + 1, dtype=np.int64) * k,
        indices=idx.ravel().astype(np.int64),
        distances=np.sqrt(sq.ravel()),
        mode="knn",
        param=k,
        n_points=n,
        tokens=tokens,
    )


def knn_all(m, k: int, *, block: int = DEFAULT_BLOCK, n_jobs: int = 1) -> NeighborTable:
    """The ``k`` nearest other rows of every row.

    Ties in distance go to the smaller index. ``n_jobs`` threads work on
    disjoint query blocks; the result does not depend on it.
    """
    X, _ = _as_array(m)
    return _knn_search(m, np.arange(X.shape[0]), k, block, n_jobs)


def knn_for_queries(m, queries: Sequence[int], k: int, *, block: int = DEFAULT_BLOCK,
                    n_jobs: int = 1) -> NeighborTable:
    """k-NN lists for selected rows, searching over the whole matrix."""
    return _knn_search(m, queries, k, block, n_jobs)


def _radius_block(X, sq_norms, qidx, d):
    b = len(qidx)
    approx = sq_norms[qidx, None] + sq_norms[None, :] - 2.0 * (X[qidx] @ X.T)
    approx[np.arange(b), qidx] = np.inf
    margin = _shortlist_margin(X, sq_norms, qidx)
    limit = d * d * (1.0 + 1e-12) + 2.0 * margin
    rows, cols = np.nonzero(approx < limit[:, None])
    rows, cols, sq = _rank_exact(X, qidx, rows, cols)
    dist = np.sqrt(sq)
    keep = dist < d
    rows, cols, dist = rows[keep], cols[keep], dist[keep]
    return np.bincount(rows, minlength=b), cols, dist


def radius_all(m, d: float, *, block: int = DEFAULT_BLOCK, n_jobs: int = 1) -> NeighborTable:
    """All other rows at distance strictly less than ``d``, for every row."""
    if not d > 0:
        raise ValueError(f"d must be positive, got {d}")
    X, tokens = _as_array(m)
    n = X.shape[0]
    sq_norms = squared_distances_paired(X, np.zeros_like(X))
    parts = _run_blocks(lambda c: _radius_block(X, sq_norms, c, d), np.arange(n), block, n_jobs)
    counts = np.concatenate([p[0] for p in parts])
    return NeighborTable(
        queries=np.arange(n, dtype=np.int64),
        indptr=_indptr_from_counts(counts),
        indices=np.concatenate([p[1] for p in parts]).astype(np.int64),
        distances=np.concatenate([p[2] for p in parts]),
        mode="radius",
        param=float(d),
        n_points=n,
        tokens=tokens,
    )


def knn_oracle(m, k: int) -> NeighborTable:
    """Reference k-NN: full distance row per query, full sort, one thread."""
    X, tokens = _as_array(m)
    n = X.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")
    all_idx = np.arange(n)
    indices, dists = [], []
    for i in range(n):
        sq = squared_distances_paired(np.broadcast_to(X[i], X.shape), X)
        others = all_idx[all_idx != i]
        order = np.lexsort((others, sq[others]))[:k]
        indices.append(others[order])
        dists.append(np.sqrt(sq[others][order]))
    return NeighborTable(
        queries=all_idx.astype(np.int64),
        indptr=np.arange(n + 1, dtype=np.int64) * k,
        indices=np.concatenate(indices).astype(np.int64),
        distances=np.concatenate(dists),
        mode="knn",
        param=k,
        n_points=n,
        tokens=tokens,
    )


def write_neighbor_table(nt: NeighborTable, path, tokens: Sequence[str] | None = None) -> None:
    """TSV dump: query_token, neighbor_token, distance (6 decimals)."""
    tokens = tokens if tokens is not None else nt.tokens
    if tokens is None:
        tokens = [str(i) for i in range(nt.n_points)]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("query_token\tneighbor_token\tdistance\n")
        for qi, q in enumerate(nt.queries):
            idx, dist = nt.neighbors_of(qi)
            for j, dj in zip(idx, dist):
                fh.write(f"{tokens[q]}\t{tokens[j]}\t{dj:.6f}\n")
