"""Spectral solve of ``u'(t) = f(t) u(t)``, ``u(-1) = 1`` on [-1, 1].

The solution's Legendre coefficients are ``u = H_M y`` where
``(I_M - F_M) y = [p_0(-1), ..., p_{M-1}(-1)]``; this is the discrete form of
``u(t, s) = Theta * (1 - f)^{-1}`` evaluated at ``s = -1``. Only the leading
part of ``u`` is unaffected by truncating the infinite matrices; its length
is estimated from the numerical band of the discrete solution operator.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import SolverError
from .legendre import LegendreSeries, eval_series, fit_series, norm_factor
from .linalg import (
    MACHINE_EPS,
    banded_lu,
    identity_minus,
    numerical_bandwidth,
    resolvent_columns,
    resolvent_rows,
    row_lower_extent,
    solve,
)
from .star import coeff_matrix, heaviside_matrix

#: Above this size the full inverse is not formed unless asked for.
FULL_INVERSE_MAX = 2048
RESIDUAL_RTOL = 1e-10


class TruncationWarning(UserWarning):
    """``M`` is smaller than the length of the fitted generator."""


@dataclass(frozen=True)
class SolveConfig:
    """Parameters of one solve.

    Attributes:
        M: basis size (number of solution coefficients).
        fit_tol: weighted drop tolerance of the Legendre fit of ``f``.
        band_eps: magnitude threshold for numerical bandwidths.
        max_degree: degree budget of the fit.
        full_inverse: form all of ``(I - F)^{-1}``; defaults to ``M <= 2048``.
            When off, only the rows needed for the trailing band are solved.
    """

    M: int
    fit_tol: float = 1e-15
    band_eps: float = MACHINE_EPS
    max_degree: int = 4096
    full_inverse: bool | None = None

    def __post_init__(self):
        if self.M < 2:
            raise ValueError("M must be >= 2")
        if self.fit_tol <= 0 or self.band_eps <= 0:
            raise ValueError("fit_tol and band_eps must be positive")
        if self.max_degree < 1:
            raise ValueError("max_degree must be positive")


@dataclass(frozen=True)
class SolveReport:
    """Result of :func:`solve_ode`.

    ``K`` is the trailing numerical band of ``(I - F)^{-1}``, read off the
    solution operator ``U = H (I - F)^{-1}`` as its trailing band less the
    one diagonal that the tridiagonal ``H`` contributes. ``L = M - K - 1``
    is the number of leading coefficients taken as accurate: ``u_0`` to
    ``u_{L-1}``.
    """

    u: LegendreSeries
    N: int
    K: int
    L: int
    residual: float
    M: int
    f_series: LegendreSeries
    band_F: int
    band_U: int
    band_resolvent: int | None = None
    timings: dict = field(default_factory=dict)

    def __call__(self, t, n: int | None = None):
        return evaluate_solution(self, t, n)


def rhs_vector(M: int) -> np.ndarray:
    """``[p_k(-1)]_{k<M} = (-1)^k sqrt((2k+1)/2)``."""
    if M < 1:
        raise ValueError("M must be >= 1")
    k = np.arange(M)
    return np.where(k % 2 == 0, 1.0, -1.0) * norm_factor(k)


def suggest_size(N: int) -> int:
    """Heuristic basis size ``max(8N, N + 64)``.

    No accuracy guarantee; it only reproduces the ratio of basis size to
    generator length that works for moderately oscillatory inputs.
    """
    return max(8 * N, N + 64)


def _as_series(f, cfg: SolveConfig) -> LegendreSeries:
    if isinstance(f, LegendreSeries):
        return f
    if not callable(f):
        raise TypeError("f must be a LegendreSeries or a callable of t")
    return fit_series(f, tol=cfg.fit_tol, max_degree=cfg.max_degree)


def solve_ode(f: Union[LegendreSeries, Callable], cfg: SolveConfig) -> SolveReport:
    """Solve ``u' = f u``, ``u(-1) = 1`` for the Legendre coefficients of ``u``.

    Args:
        f: the coefficient function, either already as a Legendre series or
            as a callable (e.g. a parsed :class:`~starode.exprparse.FunctionExpr`).
        cfg: solve parameters.

    Raises:
        FitError: ``f`` could not be resolved within ``cfg.max_degree``.
        SingularMatrixError: ``I - F`` is numerically singular.
        SolverError: the linear solve failed its residual check.
    """
    timings = {}
    t0 = time.perf_counter()
    series = _as_series(f, cfg)
    timings["fit"] = time.perf_counter() - t0

    M = cfg.M
    N = len(series)
    if M < N:
        warnings.warn(
            f"M={M} is smaller than the generator length N={N}", TruncationWarning, stacklevel=2
        )

    t0 = time.perf_counter()
    F = coeff_matrix(series, M)
    H = heaviside_matrix(M)
    A = identity_minus(F)
    timings["assemble"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    fact = banded_lu(A)
    rhs = rhs_vector(M)
    y = solve(fact, rhs)
    residual = float(np.max(np.abs(A.matvec(y) - rhs)))
    if not residual <= RESIDUAL_RTOL * np.max(np.abs(rhs)):
        raise SolverError(f"residual {residual:.3e} exceeds tolerance")
    u = H.entries @ y
    timings["solve"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    full = cfg.full_inverse if cfg.full_inverse is not None else M <= FULL_INVERSE_MAX
    if full:
        R = resolvent_columns(F, fact=fact)
        band_resolvent = numerical_bandwidth(R, cfg.band_eps)
        U_tail = H.entries[-1:] @ R
    else:
        R_tail = resolvent_rows(F, [M - 2, M - 1], fact=fact)
        band_resolvent = None
        U_tail = H.entries[-1:, -2:] @ R_tail
    band_U = row_lower_extent(U_tail, M - 1, cfg.band_eps)
    timings["bandwidth"] = time.perf_counter() - t0

    K = max(band_U - 1, 0)
    L = M - K - 1 if K < M else 0
    return SolveReport(
        u=LegendreSeries(u),
        N=N,
        K=K,
        L=max(L, 0),
        residual=residual,
        M=M,
        f_series=series,
        band_F=numerical_bandwidth(F, cfg.band_eps),
        band_U=band_U,
        band_resolvent=band_resolvent,
        timings=timings,
    )


def solution_operator(F, H=None) -> np.ndarray:
    """Dense ``U_M = H_M (I_M - F_M)^{-1}``."""
    M = np.asarray(getattr(F, "entries", F)).shape[0]
    H = heaviside_matrix(M) if H is None else H
    return H.entries @ resolvent_columns(F)


def evaluate_solution(r: SolveReport, t, n: int | None = None):
    """``u_n(t) = sum_{k<=n} u_k p_k(t)``.

    ``n`` defaults to ``L - 1``, i.e. the sum of the ``L`` trusted
    coefficients ``u_0..u_{L-1}``.
    """
    n = max(r.L - 1, 0) if n is None else n
    if not 0 <= n <= r.M - 1:
        raise ValueError(f"truncation n={n} outside [0, {r.M - 1}]")
    return eval_series(r.u.truncate(n), t)
