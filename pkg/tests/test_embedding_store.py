import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from langnet import (
    EmbeddingFormatError,
    EmbeddingMatrix,
    EmbeddingStats,
    Vocabulary,
    load_embeddings,
    random_baseline,
    save_embeddings,
    stats,
    synth_mixture,
    top_n,
)
from langnet.embedding_store import from_array


def write(tmp_path, text, name="emb.txt"):
    p = tmp_path / name
    p.write_bytes(text.encode("utf-8"))
    return p


ABC = "3 2\na 0.5 1\nb -2 3e-1\nc 4 5\n"


def test_load_basic(tmp_path):
    m = load_embeddings(write(tmp_path, ABC))
    assert (m.n, m.dim) == (3, 2)
    assert m.tokens == ("a", "b", "c")
    np.testing.assert_array_equal(m.vectors, [[0.5, 1.0], [-2.0, 0.3], [4.0, 5.0]])
    assert m.vocab.lookup("b") == 1
    np.testing.assert_array_equal(m["c"], [4.0, 5.0])


def test_load_limit_is_prefix(tmp_path):
    m = load_embeddings(write(tmp_path, ABC), limit=2)
    assert m.n == 2
    assert m.tokens == ("a", "b")


def test_limit_above_declared(tmp_path):
    with pytest.raises(ValueError):
        load_embeddings(write(tmp_path, ABC), limit=4)


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("3 2\na 1 2\nb 1\nc 1 2\n", 3),  # short row
        ("2 2\na 1 2\na 3 4\n", 3),  # duplicate token
        ("2 2\na 1 2\nb 1 x\n", 3),  # non-numeric
        ("2 2\na 1 2\nb 1 2 3\n", 3),  # long row
        ("2 x\na 1 2\n", 1),  # header
        ("2\na 1 2\n", 1),
        ("3 2\na 1 2\nb 1 2\n", 4),  # truncated file
        ("2 2\na 1 2\nb nan 2\n", 3),
    ],
)
def test_load_errors_report_line(tmp_path, text, lineno):
    with pytest.raises(EmbeddingFormatError) as info:
        load_embeddings(write(tmp_path, text))
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_round_trip_exact(tmp_path):
    rng = np.random.default_rng(3)
    m = from_array(rng.standard_normal((50, 7)) * 10.0 ** rng.integers(-8, 8, size=(50, 7)))
    path = tmp_path / "rt.txt"
    save_embeddings(m, path)
    back = load_embeddings(path)
    assert back.tokens == m.tokens
    np.testing.assert_array_equal(back.vectors, m.vectors)


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 5)),
              elements=st.floats(-1e300, 1e300, allow_nan=False)))
def test_round_trip_property(tmp_path_factory, values):
    m = from_array(values)
    path = tmp_path_factory.mktemp("rt") / "m.txt"
    save_embeddings(m, path)
    back = load_embeddings(path)
    np.testing.assert_array_equal(back.vectors, m.vectors)


def test_vocabulary_rejects_duplicates_and_spaces():
    with pytest.raises(ValueError):
        Vocabulary(["a", "a"])
    with pytest.raises(ValueError):
        Vocabulary(["a b"])


def test_matrix_is_read_only():
    m = from_array(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        m.vectors[0, 0] = 1.0


def test_matrix_rejects_non_finite():
    with pytest.raises(ValueError):
        from_array(np.array([[0.0, np.inf]]))


def test_stats_constant():
    s = stats(from_array(np.full((4, 3), 5.0)))
    assert s.mean == 5.0 and s.std == 0.0


def test_stats_two_point():
    s = stats(from_array(np.array([[0.0, 2.0]])))
    assert s.mean == 1.0 and s.std == 1.0


def test_stats_matches_two_pass_oracle():
    rng = np.random.default_rng(11)
    X = rng.normal(0.3, 2.0, size=(100, 8))
    values = X.ravel().tolist()
    mean = math.fsum(values) / len(values)
    std = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / len(values))
    s = stats(from_array(X))
    assert s.mean == pytest.approx(mean, rel=1e-12)
    assert s.std == pytest.approx(std, rel=1e-12)


def test_random_baseline_degenerate():
    m = random_baseline(5, 3, EmbeddingStats(0.0, 0.0), seed=1)
    np.testing.assert_array_equal(m.vectors, 0.0)


def test_random_baseline_support_and_tokens():
    m = random_baseline(200, 16, EmbeddingStats(0.7, 0.25), seed=2)
    assert m.vectors.min() >= 0.45 and m.vectors.max() <= 0.95
    assert m.tokens[:3] == ("w0", "w1", "w2")


def test_random_baseline_seeding():
    s = EmbeddingStats(0.0, 1.0)
    a, b = random_baseline(20, 4, s, seed=5), random_baseline(20, 4, s, seed=5)
    c = random_baseline(20, 4, s, seed=6)
    assert a.vectors.tobytes() == b.vectors.tobytes()
    assert not np.array_equal(a.vectors, c.vectors)


def test_random_baseline_moments():
    # U(-1, 1): mean 0, std 1/sqrt(3)
    m = random_baseline(15625, 64, EmbeddingStats(0.0, 1.0), seed=0)
    s = stats(m)
    assert abs(s.mean) <= 0.005
    assert abs(s.std - 1 / math.sqrt(3)) <= 0.01


def test_synth_single_cluster():
    m, labels = synth_mixture(30, 4, 1, spread=1.0, separation=5.0, seed=0)
    assert m.n == 30 and set(labels.tolist()) == {0}


def test_synth_degenerate_collapse():
    m, _ = synth_mixture(10, 3, 3, spread=1e-12, separation=0.0, seed=0)
    assert np.abs(m.vectors).max() < 1e-10


@pytest.mark.parametrize("clusters, dim", [(4, 8), (6, 3), (2, 1)])
def test_synth_center_separation(clusters, dim):
    m, labels = synth_mixture(clusters * 200, dim, clusters, spread=0.01, separation=3.0, seed=4)
    centers = np.array([m.vectors[labels == c].mean(axis=0) for c in range(clusters)])
    d = np.sqrt(((centers[:, None] - centers[None]) ** 2).sum(-1))
    assert d[np.triu_indices(clusters, 1)].min() >= 3.0 - 0.01


def test_synth_deterministic():
    a = synth_mixture(50, 4, 3, 1.0, 5.0, seed=9)
    b = synth_mixture(50, 4, 3, 1.0, 5.0, seed=9)
    assert a[0].vectors.tobytes() == b[0].vectors.tobytes()
    np.testing.assert_array_equal(a[1], b[1])


def test_top_n():
    m = from_array(np.arange(12.0).reshape(6, 2))
    assert top_n(m, 6) is m
    t = top_n(m, 2)
    assert t.tokens == ("w0", "w1")
    np.testing.assert_array_equal(t.vectors, [[0, 1], [2, 3]])
    with pytest.raises(ValueError):
        top_n(m, 0)
    with pytest.raises(ValueError):
        top_n(m, 7)


def test_embedding_matrix_validates_shape():
    with pytest.raises(ValueError):
        EmbeddingMatrix(np.zeros((0, 3)), Vocabulary([]))
    with pytest.raises(ValueError):
        EmbeddingMatrix(np.zeros((2, 3)), Vocabulary(["a"]))
