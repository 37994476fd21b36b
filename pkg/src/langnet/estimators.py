"""scikit-learn style wrappers around the graph induction and analysis code.

The transformers map an ``(n_samples, n_features)`` embedding array to a
sparse symmetric adjacency matrix, like ``sklearn.neighbors.kneighbors_graph``
but with the exact, tie-stable search and undirected conversion used here.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import community, graph, neighbors, netmetrics
from .validation import check_embeddings, check_graph, check_positive_int


class KNNGraph(TransformerMixin, BaseEstimator):
    """Undirected k-nearest-neighbour graph over the rows of ``X``.

    Parameters
    ----------
    n_neighbors : int, default=6
        Links per node before the direction is dropped.
    queries : array-like of int, optional
        Restrict the searches to these rows (the candidate pool is still
        every row). The result is then the ego graph of the queries.
    n_jobs : int, default=1
        Threads for the blocked search. Does not change the output.

    Attributes
    ----------
    neighbors_ : NeighborTable
    graph_ : UndirectedGraph
    n_features_in_ : int
    """

    def __init__(self, n_neighbors=6, queries=None, n_jobs=1):
        self.n_neighbors = n_neighbors
        self.queries = queries
        self.n_jobs = n_jobs

    def _induce(self, X):
        m = check_embeddings(X)
        k = check_positive_int(self.n_neighbors, "n_neighbors")
        if self.queries is None:
            table = neighbors.knn_all(m, k, n_jobs=self.n_jobs)
            g = graph.induce_knn_graph(table)
        else:
            table = neighbors.knn_for_queries(m, self.queries, k, n_jobs=self.n_jobs)
            g = graph.induce_ego_graph(table)
        return m, table, g

    def fit(self, X, y=None):
        m, self.neighbors_, self.graph_ = self._induce(X)
        self.n_features_in_ = m.dim
        return self

    def transform(self, X):
        check_is_fitted(self, "graph_")
        return self._induce(X)[2].adjacency()

    def fit_transform(self, X, y=None):
        return self.fit(X).graph_.adjacency()


class ProximityGraph(TransformerMixin, BaseEstimator):
    """Graph linking every pair of rows closer than ``radius``."""

    def __init__(self, radius=1.0, n_jobs=1):
        self.radius = radius
        self.n_jobs = n_jobs

    def _induce(self, X):
        m = check_embeddings(X)
        table = neighbors.radius_all(m, float(self.radius), n_jobs=self.n_jobs)
        return m, table, graph.induce_proximity_graph(table)

    def fit(self, X, y=None):
        m, self.neighbors_, self.graph_ = self._induce(X)
        self.n_features_in_ = m.dim
        return self

    def transform(self, X):
        check_is_fitted(self, "graph_")
        return self._induce(X)[2].adjacency()

    def fit_transform(self, X, y=None):
        return self.fit(X).graph_.adjacency()


class Louvain(ClusterMixin, BaseEstimator):
    """Louvain communities of a graph.

    ``fit`` takes an :class:`UndirectedGraph`, a square adjacency matrix or a
    networkx graph. After fitting, ``labels_`` holds one community per node
    (largest community is 0) and ``modularity_`` its modularity.
    """

    def __init__(self, random_state=0):
        self.random_state = random_state

    def fit(self, G, y=None):
        g = check_graph(G)
        self.partition_ = community.louvain(g, seed=self.random_state)
        self.labels_ = self.partition_.assignment
        self.modularity_ = self.partition_.modularity
        self.n_communities_ = self.partition_.n_communities
        return self


class NetworkProfiler(BaseEstimator):
    """Computes the summary statistics of a graph into ``report_``.

    Parameters
    ----------
    x_min : int, optional
        Lower cut-off for the degree exponent fit; defaults to the smallest
        positive degree (equal to k for k-NN graphs).
    path_sources : int, default=1000
        BFS sources for the sampled path length on large graphs.
    random_state : int, default=0
    """

    def __init__(self, x_min=None, path_sources=netmetrics.DEFAULT_PATH_SOURCES, random_state=0):
        self.x_min = x_min
        self.path_sources = path_sources
        self.random_state = random_state

    def fit(self, G, y=None):
        g = check_graph(G)
        self.report_ = netmetrics.network_report(
            g, x_min=self.x_min, path_sources=self.path_sources, seed=self.random_state
        )
        self.pagerank_ = netmetrics.pagerank(g)
        return self

    def transform(self, G):
        """Per-node features: degree, local clustering, PageRank."""
        g = check_graph(G)
        return np.column_stack([
            g.degrees().astype(np.float64),
            netmetrics.local_clustering(g),
            netmetrics.pagerank(g),
        ])
