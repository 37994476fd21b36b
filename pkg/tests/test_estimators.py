import networkx as nx
import numpy as np
import pytest
import scipy.sparse as sp
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from langnet import (
    KNNGraph,
    Louvain,
    NetworkProfiler,
    ProximityGraph,
    compare_partitions,
    induce_knn_graph,
    knn_all,
    synth_mixture,
)


def test_knn_graph_params_and_clone():
    est = KNNGraph(n_neighbors=3, n_jobs=2)
    assert est.get_params() == {"n_neighbors": 3, "queries": None, "n_jobs": 2}
    c = clone(est).set_params(n_neighbors=5)
    assert c.n_neighbors == 5 and est.n_neighbors == 3


def test_knn_graph_transform_matches_functional():
    X = np.random.default_rng(0).standard_normal((50, 4))
    A = KNNGraph(n_neighbors=3).fit_transform(X)
    assert sp.issparse(A) and A.shape == (50, 50)
    expected = induce_knn_graph(knn_all(X, 3)).adjacency()
    assert (A != expected).nnz == 0
    assert (A != A.T).nnz == 0


def test_knn_graph_not_fitted():
    with pytest.raises(NotFittedError):
        KNNGraph().transform(np.zeros((3, 2)))


def test_knn_graph_input_validation():
    with pytest.raises(ValueError):
        KNNGraph(n_neighbors=2).fit(np.array([[0.0, np.nan], [1.0, 1.0], [2.0, 2.0]]))
    with pytest.raises(TypeError):
        KNNGraph(n_neighbors=2.5).fit(np.zeros((4, 2)))


def test_knn_graph_ego_mode(line_points):
    est = KNNGraph(n_neighbors=2, queries=[0]).fit(line_points)
    assert est.graph_.node_ids.tolist() == [0, 1, 2]
    assert est.n_features_in_ == 1


def test_proximity_graph(line_points):
    est = ProximityGraph(radius=2.5).fit(line_points)
    assert est.graph_.n_edges == 2
    assert est.transform(line_points).nnz == 4


def test_louvain_estimator_accepts_many_inputs(two_triangles):
    for G in (two_triangles, two_triangles.adjacency(), two_triangles.adjacency().toarray()):
        est = Louvain(random_state=0).fit(G)
        assert est.labels_.tolist() == [0, 0, 0, 1, 1, 1]
        assert est.modularity_ == pytest.approx(0.5)
    G = nx.Graph([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert Louvain().fit_predict(G).tolist() == [0, 0, 0, 1, 1, 1]


def test_pipeline_embedding_to_communities():
    m, truth = synth_mixture(400, 8, 4, spread=1.0, separation=10.0, seed=2)
    pipe = make_pipeline(KNNGraph(n_neighbors=6), Louvain(random_state=0))
    labels = pipe.fit_predict(m.vectors)
    assert compare_partitions(labels, truth) >= 0.95


def test_profiler(two_triangles):
    prof = NetworkProfiler(path_sources=10).fit(two_triangles)
    assert prof.report_.clustering_coefficient == 1.0
    assert prof.report_.num_components == 2
    feats = prof.transform(two_triangles)
    assert feats.shape == (6, 3)
    np.testing.assert_allclose(feats[:, 2].sum(), 1.0)
