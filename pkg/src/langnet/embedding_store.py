"""Embedding matrices: loading, saving, summary statistics and generators.

Rows are assumed to be in descending word-frequency order, so taking a
prefix of the file is the same as restricting to the most frequent words.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class EmbeddingFormatError(ValueError):
    """Raised when an embedding text file cannot be parsed."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class Vocabulary:
    """Ordered, unique tokens; position is the frequency rank."""

    def __init__(self, tokens: Iterable[str]):
        self._tokens = tuple(tokens)
        self._index = {}
        for i, tok in enumerate(self._tokens):
            if not tok or any(ch.isspace() for ch in tok):
                raise ValueError(f"invalid token {tok!r} at rank {i}")
            if tok in self._index:
                raise ValueError(f"duplicate token {tok!r} at rank {i}")
            self._index[tok] = i

    @classmethod
    def synthetic(cls, n: int, prefix: str = "w") -> "Vocabulary":
        return cls(f"{prefix}{i}" for i in range(n))

    @property
    def tokens(self) -> tuple[str, ...]:
        return self._tokens

    def lookup(self, token: str) -> int:
        return self._index[token]

    def __len__(self) -> int:
        return len(self._tokens)

    def __getitem__(self, i):
        return self._tokens[i]

    def __iter__(self):
        return iter(self._tokens)

    def __contains__(self, token) -> bool:
        return token in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self._tokens == other._tokens

    def __repr__(self) -> str:
        return f"Vocabulary(n={len(self)})"


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    """An ``n x dim`` matrix of word vectors with its vocabulary.

    The vectors are stored as a read-only float64 array.
    """

    vectors: np.ndarray
    vocab: Vocabulary
    source_tag: str = ""

    def __post_init__(self):
        vectors = np.array(self.vectors, dtype=np.float64, copy=True)
        if vectors.ndim != 2:
            raise ValueError(f"expected a 2-d array, got shape {vectors.shape}")
        n, dim = vectors.shape
        if n < 1 or dim < 1:
            raise ValueError(f"empty embedding matrix with shape {vectors.shape}")
        if not np.all(np.isfinite(vectors)):
            bad = int(np.nonzero(~np.isfinite(vectors).all(axis=1))[0][0])
            raise ValueError(f"non-finite value in row {bad}")
        vocab = self.vocab
        if not isinstance(vocab, Vocabulary):
            vocab = Vocabulary(vocab)
        if len(vocab) != n:
            raise ValueError(f"vocabulary has {len(vocab)} tokens for {n} rows")
        vectors.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "vocab", vocab)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def tokens(self) -> tuple[str, ...]:
        return self.vocab.tokens

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, token: str) -> np.ndarray:
        return self.vectors[self.vocab.lookup(token)]


@dataclass(frozen=True)
class EmbeddingStats:
    mean: float
    std: float

    def __post_init__(self):
        if self.std < 0:
            raise ValueError("std must be non-negative")


def _parse_header(line: str) -> tuple[int, int]:
    parts = line.rstrip("\n").split(" ")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise EmbeddingFormatError(f"malformed header {line.rstrip()!r}", 1)
    n, dim = int(parts[0]), int(parts[1])
    if n < 1 or dim < 1:
        raise EmbeddingFormatError(f"header declares empty matrix ({n} x {dim})", 1)
    return n, dim


def load_embeddings(path, limit: int | None = None) -> EmbeddingMatrix:
    """Read an embedding text file.

    The first line is ``"<n> <dim>"``; each following line is a token and
    ``dim`` decimal values separated by single spaces. ``limit`` keeps only
    the first rows, which are the most frequent words.
    """
    path = Path(path)
    with open(path, encoding="utf-8", newline="\n") as fh:
        header = fh.readline()
        if not header:
            raise EmbeddingFormatError("empty file", 1)
        n, dim = _parse_header(header)
        if limit is not None:
            if limit < 1:
                raise ValueError("limit must be at least 1")
            if limit > n:
                raise ValueError(f"limit {limit} exceeds declared row count {n}")
            n = limit

        tokens: list[str] = []
        seen: set[str] = set()
        vectors = np.empty((n, dim), dtype=np.float64)
        for row in range(n):
            lineno = row + 2
            line = fh.readline()
            if not line:
                raise EmbeddingFormatError(f"expected {n} rows, found {row}", lineno)
            line = line.rstrip("\n")
            if line.endswith("\r"):
                raise EmbeddingFormatError("CRLF line ending", lineno)
            fields = line.split(" ")
            if len(fields) != dim + 1:
                raise EmbeddingFormatError(
                    f"expected {dim} values, found {len(fields) - 1}", lineno
                )
            tok = fields[0]
            if not tok:
                raise EmbeddingFormatError("empty token", lineno)
            if tok in seen:
                raise EmbeddingFormatError(f"duplicate token {tok!r}", lineno)
            seen.add(tok)
            try:
                values = [float(v) for v in fields[1:]]
            except ValueError as exc:
                raise EmbeddingFormatError(f"non-numeric field ({exc})", lineno) from None
            if not all(np.isfinite(values)):
                raise EmbeddingFormatError("non-finite value", lineno)
            vectors[row] = values
            tokens.append(tok)

        if limit is None:
            extra = fh.readline()
            if extra and extra.strip():
                raise EmbeddingFormatError(
                    f"more rows than the declared {n}", n + 2
                )

    return EmbeddingMatrix(vectors, Vocabulary(tokens), source_tag=str(path))


def save_embeddings(m: EmbeddingMatrix, path) -> None:
    # repr() gives the shortest string that round-trips exactly
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{m.n} {m.dim}\n")
        for tok, row in zip(m.tokens, m.vectors):
            fh.write(tok + " " + " ".join(repr(float(x)) for x in row) + "\n")


def stats(m: EmbeddingMatrix) -> EmbeddingStats:
    """Mean and population standard deviation over all entries."""
    values = m.vectors
    mean = float(values.mean())
    std = float(np.sqrt(np.mean((values - mean) ** 2)))
    return EmbeddingStats(mean=mean, std=std)


def random_baseline(n: int, dim: int, stats: EmbeddingStats, seed: int = 0) -> EmbeddingMatrix:
    """Uniform random vectors on ``[mean - std, mean + std]``.

    Matches the value range of a trained embedding so the induced network
    can serve as a structure-free baseline.
    """
    if n < 1 or dim < 1:
        raise ValueError("n and dim must be at least 1")
    rng = np.random.default_rng(seed)
    lo, hi = stats.mean - stats.std, stats.mean + stats.std
    vectors = rng.uniform(lo, hi, size=(n, dim)) if hi > lo else np.full((n, dim), stats.mean)
    return EmbeddingMatrix(
        vectors,
        Vocabulary.synthetic(n),
        source_tag=f"random_baseline(mean={stats.mean!r}, std={stats.std!r}, seed={seed})",
    )


def _cluster_centers(clusters: int, dim: int, separation: float, rng) -> np.ndarray:
    if clusters == 1 or separation == 0:
        return np.zeros((clusters, dim))
    if clusters <= dim:
        # scaled simplex corners: every pair is exactly `separation` apart
        centers = np.zeros((clusters, dim))
        centers[np.arange(clusters), rng.permutation(dim)[:clusters]] = separation / np.sqrt(2.0)
        return centers
    centers = rng.standard_normal((clusters, dim))
    diff = centers[:, None, :] - centers[None, :, :]
    dists = np.sqrt((diff ** 2).sum(-1))
    closest = dists[np.triu_indices(clusters, 1)].min()
    return centers * (separation / closest) * (1 + 1e-9)


def synth_mixture(
    n: int,
    dim: int,
    clusters: int,
    spread: float,
    separation: float,
    seed: int = 0,
):
    """Isotropic Gaussian blobs with a known assignment.

    Returns ``(matrix, labels)`` where ``labels[i]`` is the planted cluster of
    row ``i``. Cluster centres are at least ``separation`` apart.
    """
    if n < 1 or dim < 1:
        raise ValueError("n and dim must be at least 1")
    if clusters < 1:
        raise ValueError("clusters must be at least 1")
    if spread <= 0:
        raise ValueError("spread must be positive")
    if separation < 0:
        raise ValueError("separation must be non-negative")
    rng = np.random.default_rng(seed)
    centers = _cluster_centers(clusters, dim, separation, rng)
    labels = rng.permutation(np.arange(n) % clusters)
    vectors = centers[labels] + spread * rng.standard_normal((n, dim))
    m = EmbeddingMatrix(
        vectors,
        Vocabulary.synthetic(n),
        source_tag=f"synth_mixture(clusters={clusters}, spread={spread}, separation={separation}, seed={seed})",
    )
    return m, labels.astype(np.int64)


def top_n(m: EmbeddingMatrix, n: int) -> EmbeddingMatrix:
    if n < 1:
        raise ValueError("top_n needs n >= 1")
    if n > m.n:
        raise ValueError(f"requested {n} rows from a matrix with {m.n}")
    if n == m.n:
        return m
    return EmbeddingMatrix(m.vectors[:n], Vocabulary(m.tokens[:n]), source_tag=m.source_tag)


def from_array(X, tokens: Sequence[str] | None = None, source_tag: str = "") -> EmbeddingMatrix:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {X.shape}")
    vocab = Vocabulary(tokens) if tokens is not None else Vocabulary.synthetic(X.shape[0])
    return EmbeddingMatrix(X, vocab, source_tag=source_tag)
