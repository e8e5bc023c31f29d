"""Reference solutions for validating the spectral solver.

For the scalar problem the exact solution is ``exp(A(t))`` with
``A(t) = int_{-1}^t f``. ``A`` is taken from the termwise antiderivative of
the fitted series, so nothing here goes through the star-algebra matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .legendre import LegendreSeries, antiderivative, eval_series, fit_series, vander

DEFAULT_GRID = 1000


def exact_solution(f: LegendreSeries, t):
    """``u(t) = exp(int_{-1}^t f)``; equals 1 at ``t = -1``."""
    return np.exp(eval_series(antiderivative(f), t))


def oracle_coeffs(f: LegendreSeries, count: int, tol: float = 1e-15,
                  max_degree: int = 4096) -> LegendreSeries:
    """First ``count`` Legendre coefficients of the exact solution (zero padded)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    A = antiderivative(f)
    fitted = fit_series(lambda t: np.exp(eval_series(A, t)), tol=tol, max_degree=max_degree)
    c = np.zeros(count, dtype=complex)
    n = min(count, len(fitted))
    c[:n] = fitted.coeffs[:n]
    return LegendreSeries(c)


@dataclass(frozen=True)
class ErrorReport:
    """Grid and coefficient errors of a solve.

    Attributes:
        grid_size: number of equispaced points on [-1, 1], endpoints included.
        inf_norm_error: ``inf_norm_error[n]`` is the max grid error of the
            truncation ``u_n`` for ``n = 0..L-1`` (the trusted coefficients).
        coeff_errors: ``|u_k - u_k^oracle|`` for ``k < M``.
        oracle: the oracle coefficients used.
    """

    grid_size: int
    inf_norm_error: np.ndarray
    coeff_errors: np.ndarray
    oracle: LegendreSeries


def partial_sum_errors(u: LegendreSeries, exact_values: np.ndarray, t: np.ndarray,
                       nmax: int) -> np.ndarray:
    """Max error over ``t`` of every partial sum ``u_0..u_n``, ``n = 0..nmax``."""
    V = vander(t, nmax + 1)
    partial = np.cumsum(V * u.coeffs[: nmax + 1], axis=1)
    return np.max(np.abs(partial - exact_values[:, None]), axis=0)


def error_report(r, f: LegendreSeries | None = None, grid_size: int = DEFAULT_GRID) -> ErrorReport:
    """Compare a :class:`~starode.solver.SolveReport` against the exact solution.

    ``f`` defaults to the series the solve was run with.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    f = r.f_series if f is None else f
    t = np.linspace(-1.0, 1.0, grid_size)
    exact = exact_solution(f, t)
    inf_err = partial_sum_errors(r.u, exact, t, max(r.L - 1, 0))
    oracle = oracle_coeffs(f, r.M)
    coeff_err = np.abs(r.u.coeffs - oracle.coeffs)
    return ErrorReport(grid_size, inf_err, coeff_err, oracle)
