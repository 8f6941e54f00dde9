import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import brute_average_ranks, direct_pearson

from corrnet.corrmatrix import (
    EstimationError,
    average_offdiag,
    correlation_from_returns,
    offdiag_vector,
    pearson_matrix,
    spearman,
    spearman_month_matrix,
)
from corrnet.ingest import ReturnPanel, WindowSlice
from corrnet.spectral import sym_eigen


def _corr(columns, label="t"):
    x = np.column_stack(columns).astype(float)
    return correlation_from_returns(x, [f"a{k}" for k in range(x.shape[1])], label)


def test_identical_and_negated_columns():
    x = np.array([0.3, -1.2, 2.0, 0.7, 0.1])
    C = _corr([x, x, -x]).values
    assert C[0, 1] == pytest.approx(1.0, abs=1e-15)
    assert C[0, 2] == pytest.approx(-1.0, abs=1e-15)


def test_hand_evaluated_pair():
    # direct summation: sxy = 10, sxx = 10, syy = 14.8
    C = _corr([[1, 2, 3, 4, 5], [2, 1, 4, 3, 6]])
    assert C.values[0, 1] == pytest.approx(0.8219949365267865, abs=1e-15)
    assert direct_pearson([1, 2, 3, 4, 5], [2, 1, 4, 3, 6]) == pytest.approx(10 / np.sqrt(148))


def test_matrix_invariants():
    x = np.random.default_rng(0).normal(size=(80, 12))
    C = correlation_from_returns(x, [str(k) for k in range(12)]).values
    assert np.array_equal(C, C.T)
    assert np.all(np.diag(C) == 1.0)
    assert np.all(np.abs(C) <= 1.0)
    np.testing.assert_allclose(C, np.corrcoef(x, rowvar=False), atol=1e-13)


def test_window_uses_only_its_rows():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(30, 4))
    dates = np.datetime64("2000-01-03") + np.arange(30)
    panel = ReturnPanel(dates, ("a", "b", "c", "d"), x)
    C = pearson_matrix(WindowSlice(np.datetime64("2000-01", "M"), 5, 20), panel)
    np.testing.assert_allclose(C.values, np.corrcoef(x[5:20], rowvar=False), atol=1e-13)
    assert C.n_obs == 15 and C.label == "2000-01"


def test_zero_variance_names_asset_and_month():
    x = np.random.default_rng(0).normal(size=(10, 3))
    x[:, 1] = 0.25
    with pytest.raises(EstimationError, match=r"1999-02.*a1"):
        correlation_from_returns(x, ["a0", "a1", "a2"], "1999-02")


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 100), st.floats(-100, 100), st.floats(0.01, 100), st.floats(-100, 100), st.integers(0, 10**6))
def test_scale_shift_invariance(a, b, c, d, seed):
    x = np.random.default_rng(seed).normal(size=(40, 2))
    base = _corr([x[:, 0], x[:, 1]]).values
    moved = _corr([a * x[:, 0] + b, c * x[:, 1] + d]).values
    np.testing.assert_allclose(moved, base, atol=1e-12)


def test_positive_definite_when_more_obs_than_assets():
    x = np.random.default_rng(11).normal(size=(50, 49))
    C = correlation_from_returns(x, [str(k) for k in range(49)])
    assert sym_eigen(C).eigenvalues.min() > 0


def test_average_offdiag():
    assert average_offdiag(np.eye(5)) == 0.0
    assert average_offdiag(np.ones((4, 4))) == 1.0
    m = np.array([[1, 0.2, 0.4], [0.2, 1, 0.6], [0.4, 0.6, 1]])
    assert average_offdiag(m) == pytest.approx(0.4, abs=1e-15)


def test_offdiag_vector_order():
    m = np.array([[1, 12, 13], [12, 1, 23], [13, 23, 1]], dtype=float)
    assert list(offdiag_vector(m)) == [12, 13, 23]
    assert len(offdiag_vector(np.eye(49))) == 1176
    lower = [m[j, i] for i, j in itertools.combinations(range(3), 2)]
    assert list(offdiag_vector(m)) == lower


def test_spearman_basics():
    x = [0.3, 1.5, -2.0, 4.1, 0.0]
    assert spearman(x, x) == pytest.approx(1.0, abs=1e-15)
    assert spearman(x, [-v for v in x]) == pytest.approx(-1.0, abs=1e-15)


def test_spearman_ties_against_brute_ranks():
    expected = direct_pearson(brute_average_ranks([1, 2, 2, 4]), brute_average_ranks([1, 3, 2, 4]))
    assert expected == pytest.approx(0.9486832980505138, abs=1e-15)
    assert spearman([1, 2, 2, 4], [1, 3, 2, 4]) == pytest.approx(expected, abs=1e-14)


def test_spearman_constant_is_error():
    with pytest.raises(EstimationError):
        spearman([1, 1, 1], [1, 2, 3])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)), min_size=3, max_size=30))
def test_spearman_matches_brute_force(pairs):
    x = [p[0] for p in pairs]
    y = [p[1] for p in pairs]
    if len(set(x)) < 2 or len(set(y)) < 2:
        return
    expected = direct_pearson(brute_average_ranks(x), brute_average_ranks(y))
    assert spearman(x, y) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-500, 500), min_size=3, max_size=25, unique=True), st.integers(0, 10**6))
def test_spearman_monotone_invariance(ticks, seed):
    x = np.array(ticks) / 100.0
    y = np.random.default_rng(seed).normal(size=len(x))
    base = spearman(x, y)
    assert spearman(np.exp(x), y) == pytest.approx(base, abs=1e-12)
    assert spearman(x**3, 2 * y + 7) == pytest.approx(base, abs=1e-12)


def _random_corr(seed, n=8, t=40):
    x = np.random.default_rng(seed).normal(size=(t, n))
    return correlation_from_returns(x, [str(k) for k in range(n)], f"m{seed}")


def test_month_matrix():
    mats = [_random_corr(s) for s in range(6)]
    mm = spearman_month_matrix(mats)
    assert mm.kind == "spearman"
    assert mm.values.shape == (6, 6)
    assert np.array_equal(mm.values, mm.values.T)
    assert np.all(np.diag(mm.values) == 1.0)
    for a, b in [(0, 1), (2, 5), (3, 4)]:
        expected = spearman(offdiag_vector(mats[a]), offdiag_vector(mats[b]))
        assert mm.values[a, b] == pytest.approx(expected, abs=1e-12)


def test_month_matrix_same_ranking_is_one():
    C = _random_corr(1)
    warped = type(C)("w", C.assets, np.tanh(C.values * 0.5) / np.tanh(0.5), C.n_obs)
    mm = spearman_month_matrix([C, warped])
    assert mm.values[0, 1] == pytest.approx(1.0, abs=1e-12)


def test_month_matrix_rejects_mixed_assets():
    a = _random_corr(1, n=4)
    b = correlation_from_returns(np.random.default_rng(2).normal(size=(20, 4)), list("wxyz"))
    with pytest.raises(ValueError):
        spearman_month_matrix([a, b])
