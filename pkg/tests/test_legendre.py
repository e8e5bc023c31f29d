import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quad_oracle import antiderivative_of_p, integrate, p
from starode import (
    DomainError,
    FitError,
    LegendreSeries,
    antiderivative,
    eval_poly,
    eval_series,
    fit_series,
    gauss_nodes,
    tail_bound,
)
from starode.legendre import project, vander

GRID = np.linspace(-1, 1, 1000)


@pytest.mark.parametrize(
    "k, x, expected",
    [
        (0, 0.3, 1 / np.sqrt(2)),
        (1, 0.5, np.sqrt(1.5) * 0.5),
        (3, 1.0, np.sqrt(3.5)),
    ],
)
def test_eval_poly_examples(k, x, expected):
    assert eval_poly(k, x) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("k", [0, 1, 2, 5, 17, 40])
def test_eval_poly_matches_numpy_legendre(k):
    assert np.allclose(eval_poly(k, GRID), p(k, GRID), atol=1e-13, rtol=0)


@pytest.mark.parametrize("x", [1.0000001, -2.0, np.nan])
def test_eval_poly_domain(x):
    with pytest.raises(DomainError):
        eval_poly(2, x)


def test_vander_columns():
    V = vander(GRID[::37], 12)
    for k in range(12):
        assert np.allclose(V[:, k], eval_poly(k, GRID[::37]), atol=1e-15)


def test_eval_series_examples(cos4_series):
    assert eval_series(LegendreSeries([np.sqrt(2)]), 0.42) == pytest.approx(1.0, abs=1e-15)
    assert eval_series(LegendreSeries([0, np.sqrt(2 / 3)]), 0.7) == pytest.approx(0.7, abs=1e-15)
    assert abs(eval_series(cos4_series, 0.25) - np.cos(1.0)) <= 1e-13


def test_eval_series_domain():
    with pytest.raises(DomainError):
        eval_series(LegendreSeries([1.0]), 1.5)


def test_gauss_small_rules():
    x, w = gauss_nodes(1)
    assert x.tolist() == [0.0] and w.tolist() == [2.0]
    x, w = gauss_nodes(2)
    assert np.allclose(x, [-1 / np.sqrt(3), 1 / np.sqrt(3)], atol=1e-16)
    assert np.allclose(w, [1, 1], atol=1e-16)
    assert np.sum(w * x**2) == pytest.approx(2 / 3, abs=1e-16)
    x, w = gauss_nodes(5)
    assert abs(np.sum(w * x**8) - 2 / 9) <= 1e-15


@pytest.mark.parametrize("n", [1, 2, 3, 8, 33, 64, 257])
def test_gauss_rule_structure(n):
    x, w = gauss_nodes(n)
    assert np.all(np.diff(x) > 0)
    assert np.all(w > 0)
    assert np.allclose(x, -x[::-1], atol=0)
    assert abs(w.sum() - 2) <= 1e-14


@pytest.mark.parametrize("n", [4, 16, 128])
def test_gauss_exact_to_degree_2n_minus_1(n):
    x, w = gauss_nodes(n)
    for deg in (2 * n - 2, 2 * n - 1):
        # odd moments vanish, even moments are 2/(deg+1)
        exact = 0.0 if deg % 2 else 2 / (deg + 1)
        assert abs(np.sum(w * x**deg) - exact) <= 1e-14


def test_orthonormality():
    x, w = gauss_nodes(32)
    V = vander(x, 31)
    G = (V * w[:, None]).T @ V
    assert np.max(np.abs(G - np.eye(31))) <= 1e-13


def test_uniform_bound():
    V = np.abs(vander(GRID, 51))
    assert np.all(V <= np.sqrt((2 * np.arange(51) + 1) / 2) + 1e-12)


@pytest.mark.parametrize(
    "f, expected",
    [
        (lambda t: np.ones_like(t), [np.sqrt(2)]),
        (lambda t: t, [0, np.sqrt(2 / 3)]),
    ],
)
def test_fit_series_exact_polynomials(f, expected):
    s = fit_series(f)
    assert len(s) == len(expected)
    assert np.allclose(s.coeffs, expected, atol=1e-15)


def test_fit_cos4_length(cos4_series):
    # degrees 0..21 in the reference; our projection keeps one more
    # coefficient right at the 1e-15 threshold
    assert abs(len(cos4_series) - 22) <= 1


def test_fit_drop_rule(cos4_series):
    k = len(cos4_series) - 1
    assert abs(cos4_series.coeffs[k]) * np.sqrt((2 * k + 1) / 2) > 1e-15


def test_fit_zero_function():
    s = fit_series(lambda t: 0 * t)
    assert len(s) == 1 and s.coeffs[0] == 0


def test_fit_scalar_only_callable():
    s = fit_series(lambda t: float(np.exp(t)))
    assert abs(eval_series(s, 0.3) - np.exp(0.3)) <= 1e-14


@pytest.mark.parametrize(
    "f",
    [np.exp, lambda t: np.cos(3 * t), lambda t: 1 - 2 * t + t**5, lambda t: np.exp(1j * t)],
)
def test_fit_roundtrip(f):
    tol = 1e-14
    s = fit_series(f, tol=tol)
    assert np.max(np.abs(eval_series(s, GRID) - f(GRID))) <= 10 * tol


def test_fit_nonconvergence():
    with pytest.raises(FitError):
        fit_series(np.abs, max_degree=256)


def test_fit_rejects_nonfinite():
    with pytest.raises(ValueError):
        fit_series(lambda t: np.where(t > 0.5, np.nan, t))


def test_project_is_linear():
    a = project(np.cos, 32)
    b = project(np.sin, 32)
    c = project(lambda t: 2 * np.cos(t) - 3j * np.sin(t), 32)
    assert np.allclose(c, 2 * a - 3j * b, atol=1e-15)


def test_antiderivative_examples():
    a = antiderivative(LegendreSeries([np.sqrt(2)]))
    assert np.allclose(a.coeffs, [np.sqrt(2), np.sqrt(2) / np.sqrt(3)], atol=1e-16)
    a = antiderivative(LegendreSeries([0, 1]))
    assert np.allclose(a.coeffs, [-1 / np.sqrt(3), 0, 1 / np.sqrt(15)], atol=1e-16)


@pytest.mark.parametrize("ell", [0, 1, 2, 7, 25])
def test_antiderivative_vs_quadrature(ell, rng):
    c = np.zeros(ell + 1)
    c[ell] = 1.0
    A = antiderivative(LegendreSeries(c))
    tau = rng.uniform(-1, 1, 50)
    ref = np.array([antiderivative_of_p(ell, t) for t in tau])
    assert np.max(np.abs(eval_series(A, tau) - ref)) <= 1e-13


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False), min_size=1, max_size=30))
def test_antiderivative_vanishes_at_left_end(c):
    A = antiderivative(LegendreSeries(c))
    assert len(A) == len(c) + 1
    assert abs(eval_series(A, -1.0)) <= 1e-14 * max(1.0, np.abs(c).sum())


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.floats(-5, 5), min_size=1, max_size=20),
    st.lists(st.floats(-5, 5), min_size=1, max_size=20),
    st.floats(-3, 3),
    st.floats(-3, 3),
)
def test_antiderivative_linear(s, r, alpha, beta):
    S, R = LegendreSeries(s), LegendreSeries(r)
    lhs = antiderivative(alpha * S + beta * R).coeffs
    rhs = (alpha * antiderivative(S) + beta * antiderivative(R)).coeffs
    assert np.allclose(lhs, rhs, atol=1e-13)


def test_tail_bound_examples(cos4_series):
    assert tail_bound(LegendreSeries([np.sqrt(2)]), 0) == 0
    assert tail_bound(LegendreSeries([0, 0, 1]), 1) == pytest.approx(np.sqrt(2.5), abs=1e-15)
    truncated = cos4_series.truncate(10)
    actual = np.max(np.abs(eval_series(truncated, GRID) - eval_series(cos4_series, GRID)))
    assert tail_bound(cos4_series, 10) >= actual


def test_tail_bound_range():
    with pytest.raises(ValueError):
        tail_bound(LegendreSeries([1.0, 2.0]), 2)


def test_series_invariants():
    s = LegendreSeries([])
    assert len(s) == 1 and s.coeffs[0] == 0
    with pytest.raises(ValueError):
        s.coeffs[0] = 1
    with pytest.raises(ValueError):
        LegendreSeries([np.inf])
    assert LegendreSeries([1.0, 2.0]).is_real
    assert not LegendreSeries([1.0, 2j]).is_real
    assert np.allclose(integrate(lambda x: p(3, x) ** 2, 8), 1.0)
