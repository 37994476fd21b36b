import networkx as nx
import numpy as np
import pytest
from conftest import complete_graph, graph_from_edges, to_networkx
from sklearn.metrics import normalized_mutual_info_score

from langnet import (
    compare_partitions,
    induce_knn_graph,
    knn_all,
    louvain,
    modularity,
    synth_mixture,
)
from langnet.community import Partition, canonical_labels, write_partition
from langnet.netmetrics import random_graph


def test_modularity_single_community(bridged_triangles):
    assert modularity(bridged_triangles, np.zeros(6, dtype=int)) == 0.0


def test_modularity_bridged_triangles(bridged_triangles):
    # 2 * (3/7 - (7/14)^2)
    q = modularity(bridged_triangles, [0, 0, 0, 1, 1, 1])
    assert abs(q - 5 / 14) <= 1e-12


def test_modularity_singletons(bridged_triangles):
    g = bridged_triangles
    deg = g.degrees()
    expected = -np.sum((deg / (2.0 * g.n_edges)) ** 2)
    assert modularity(g, np.arange(6)) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_modularity_matches_networkx(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(60, 150, seed)
    labels = rng.integers(0, 5, size=60)
    comms = [set(np.nonzero(labels == c)[0].tolist()) for c in np.unique(labels)]
    expected = nx.community.modularity(to_networkx(g), comms)
    assert modularity(g, labels) == pytest.approx(expected, abs=1e-12)


def test_modularity_errors(bridged_triangles):
    with pytest.raises(ValueError):
        modularity(graph_from_edges(3, []), [0, 0, 0])
    with pytest.raises(ValueError):
        modularity(bridged_triangles, [0, 1])


def test_modularity_permutation_invariant():
    rng = np.random.default_rng(3)
    g = random_graph(80, 300, 3)
    labels = rng.integers(0, 6, size=80)
    perm = rng.permutation(80)
    relabelled = np.empty_like(labels)
    relabelled[perm] = labels
    assert modularity(g.relabel(perm), relabelled) == modularity(g, labels)


def test_louvain_two_triangles(two_triangles):
    p = louvain(two_triangles, seed=0)
    assert p.assignment.tolist() == [0, 0, 0, 1, 1, 1]
    assert p.modularity == pytest.approx(0.5, abs=1e-12)


def test_louvain_complete_graph():
    p = louvain(complete_graph(6), seed=1)
    assert p.n_communities == 1
    assert p.modularity == 0.0


def test_louvain_reported_q_is_exact(bridged_triangles):
    p = louvain(bridged_triangles, seed=2)
    assert p.modularity == modularity(bridged_triangles, p.assignment)
    assert p.modularity == pytest.approx(5 / 14, abs=1e-12)


def test_louvain_requires_edges():
    with pytest.raises(ValueError):
        louvain(graph_from_edges(4, []))


@pytest.mark.parametrize("seed", range(4))
def test_louvain_trace_non_decreasing(seed):
    g = random_graph(400, 1200, seed)
    p = louvain(g, seed)
    assert all(b >= a - 1e-12 for a, b in zip(p.trace, p.trace[1:]))
    assert p.trace[-1] == pytest.approx(p.modularity, abs=1e-12)
    assert p.modularity >= modularity(g, np.arange(400))


def test_louvain_deterministic_and_dense():
    g = random_graph(300, 900, 7)
    a, b = louvain(g, 5), louvain(g, 5)
    np.testing.assert_array_equal(a.assignment, b.assignment)
    assert sorted(set(a.assignment.tolist())) == list(range(a.n_communities))
    sizes = a.sizes()
    assert all(x >= y for x, y in zip(sizes, sizes[1:]))


def test_louvain_disconnected_never_merges_components():
    g = graph_from_edges(9, [(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8), (6, 8)])
    p = louvain(g, 0)
    for u, v in [(0, 3), (0, 6), (3, 6)]:
        assert p.assignment[u] != p.assignment[v]


def test_louvain_comparable_to_networkx():
    g = random_graph(1000, 4000, 11)
    ours = louvain(g, 0).modularity
    theirs = nx.community.modularity(to_networkx(g), nx.community.louvain_communities(to_networkx(g), seed=0))
    assert ours >= theirs - 0.02


def test_louvain_recovers_planted_partition():
    m, truth = synth_mixture(400, 8, 4, spread=1.0, separation=10.0, seed=0)
    p = louvain(induce_knn_graph(knn_all(m, 6)), seed=0)
    assert compare_partitions(p, truth) >= 0.95


def test_nmi_identical_and_relabelled():
    a = np.array([0, 0, 1, 1, 2])
    assert compare_partitions(a, a) == 1.0
    assert compare_partitions(a, np.array([2, 2, 0, 0, 1])) == pytest.approx(1.0)


def test_nmi_against_trivial():
    assert compare_partitions([0, 0, 1, 1], [0, 0, 0, 0]) == 0.0
    assert compare_partitions([0, 0, 0], [5, 5, 5]) == 1.0


def test_nmi_independent_fixture():
    # {{1,2},{3,4}} vs {{1,3},{2,4}}
    assert compare_partitions([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_nmi_matches_sklearn(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.integers(0, 4, 50), rng.integers(0, 6, 50)
    expected = normalized_mutual_info_score(a, b, average_method="arithmetic")
    assert compare_partitions(a, b) == pytest.approx(expected, abs=1e-12)


def test_nmi_node_set_mismatch():
    with pytest.raises(ValueError):
        compare_partitions([0, 1], [0, 1, 1])


def test_canonical_labels():
    assert canonical_labels([7, 7, 3, 9, 9, 9]).tolist() == [1, 1, 2, 0, 0, 0]
    assert canonical_labels([4, 2, 4, 2]).tolist() == [0, 1, 0, 1]


def test_partition_dump(tmp_path, two_triangles):
    p = Partition(np.array([1, 1, 1, 0, 0, 0]))
    path = tmp_path / "c.tsv"
    write_partition(two_triangles, p, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "token\tcommunity_id"
    assert lines[1:] == ["0\t0", "1\t0", "2\t0", "3\t1", "4\t1", "5\t1"]
