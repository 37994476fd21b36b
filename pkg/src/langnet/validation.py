"""Input coercion shared by the estimators and the CLI."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.utils.validation import check_array

from .embedding_store import EmbeddingMatrix, from_array
from .graph import UndirectedGraph


def check_embeddings(X, tokens=None) -> EmbeddingMatrix:
    """Accept an EmbeddingMatrix or any 2-d finite array-like."""
    if isinstance(X, EmbeddingMatrix):
        return X
    X = check_array(X, dtype=np.float64, ensure_2d=True, ensure_all_finite=True)
    return from_array(X, tokens)


def check_graph(G) -> UndirectedGraph:
    """Accept an UndirectedGraph, a square sparse/dense adjacency, or a networkx graph."""
    if isinstance(G, UndirectedGraph):
        return G
    if sp.issparse(G) or isinstance(G, np.ndarray):
        return UndirectedGraph.from_scipy(G)
    if hasattr(G, "nodes") and hasattr(G, "edges"):
        nodes = list(G.nodes)
        index = {v: i for i, v in enumerate(nodes)}
        edges = np.array([(index[u], index[v]) for u, v in G.edges], dtype=np.int64).reshape(-1, 2)
        return UndirectedGraph.from_edges(len(nodes), edges[:, 0], edges[:, 1],
                                          labels=[str(v) for v in nodes])
    raise TypeError(f"cannot interpret {type(G).__name__} as a graph")


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)
