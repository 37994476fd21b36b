import numpy as np
import pytest

from langnet import EmbeddingMatrix, UndirectedGraph, Vocabulary


def graph_from_edges(n, edges):
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    return UndirectedGraph.from_edges(n, edges[:, 0], edges[:, 1])


@pytest.fixture
def line_points():
    """1-d points {0, 1, 3, 7}."""
    return EmbeddingMatrix(np.array([[0.0], [1.0], [3.0], [7.0]]), Vocabulary(["a", "b", "c", "d"]))


@pytest.fixture
def two_triangles():
    return graph_from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


@pytest.fixture
def bridged_triangles():
    return graph_from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


@pytest.fixture
def star5():
    return graph_from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)])


@pytest.fixture
def path3():
    return graph_from_edges(3, [(0, 1), (1, 2)])


def complete_graph(n):
    return graph_from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def to_networkx(g):
    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from(range(g.n_nodes))
    G.add_edges_from(g.edge_array().tolist())
    return G


_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome))
    elif report.when == "setup" and report.skipped and "test_acceptance.py" in report.nodeid:
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], "skipped"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    tags = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}
    for name, outcome in _ACCEPTANCE:
        terminalreporter.write_line(f"[{tags.get(outcome, outcome.upper())}] {name}")
