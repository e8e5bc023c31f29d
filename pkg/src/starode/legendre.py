"""Orthonormal Legendre polynomials on [-1, 1].

The basis is ``p_k = sqrt((2k+1)/2) * P_k`` so that ``int p_k p_l = delta_kl``.
Everything here works with that normalization directly; the classical
polynomials only appear inside the Gauss rule construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, FitError

_LD = np.longdouble

#: Node count of the first projection in :func:`fit_series`.
FIT_START_NODES = 32
#: A fit whose noise floor exceeds this fraction of the coefficient scale is
#: treated as unresolved.
FIT_NOISE_CAP = 1e-8


def _check_domain(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0) or np.any(np.isnan(x)):
        raise DomainError("Legendre evaluation requires -1 <= x <= 1")
    return x


def _rec_coeffs(k: int) -> tuple[float, float]:
    """Coefficients ``(a, b)`` of ``p_k = a x p_{k-1} - b p_{k-2}``."""
    if k == 1:
        return np.sqrt(3.0), 0.0
    a = np.sqrt((2.0 * k - 1.0) * (2.0 * k + 1.0)) / k
    b = (k - 1.0) / k * np.sqrt((2.0 * k + 1.0) / (2.0 * k - 3.0))
    return a, b


def norm_factor(k):
    """``sqrt((2k+1)/2)``: the sup of ``|p_k|`` on [-1, 1]."""
    return np.sqrt((2.0 * np.asarray(k, dtype=float) + 1.0) / 2.0)


def eval_poly(k: int, x):
    """Evaluate the degree-``k`` orthonormal Legendre polynomial at ``x``.

    ``x`` may be a scalar or an array; values outside [-1, 1] raise
    :class:`DomainError`.
    """
    if k < 0:
        raise ValueError("degree must be non-negative")
    x = _check_domain(x)
    p_prev = np.zeros_like(x)
    p = np.full_like(x, 1.0 / np.sqrt(2.0))
    for j in range(1, k + 1):
        a, b = _rec_coeffs(j)
        p_prev, p = p, a * x * p - b * p_prev
    return p if p.ndim else float(p)


def vander(x, n: int) -> np.ndarray:
    """Matrix ``V[i, k] = p_k(x_i)`` for ``k < n``."""
    x = np.atleast_1d(_check_domain(x))
    V = np.empty((x.size, n))
    if n == 0:
        return V
    V[:, 0] = 1.0 / np.sqrt(2.0)
    for k in range(1, n):
        a, b = _rec_coeffs(k)
        V[:, k] = a * x * V[:, k - 1]
        if k > 1:
            V[:, k] -= b * V[:, k - 2]
    return V


@dataclass(frozen=True)
class LegendreSeries:
    """Coefficients of a function in the orthonormal Legendre basis.

    Attributes:
        coeffs: complex coefficient array, index = degree. Never empty.
        drop_tol: the weighted threshold that was used to chop the series
            when it came out of :func:`fit_series` (0 otherwise).
    """

    coeffs: np.ndarray
    drop_tol: float = field(default=0.0)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")
        if self.drop_tol < 0:
            raise ValueError("drop_tol must be non-negative")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    def __len__(self) -> int:
        return self.coeffs.size

    def __call__(self, x):
        return eval_series(self, x)

    @property
    def is_real(self) -> bool:
        return not np.any(self.coeffs.imag)

    def truncate(self, n: int) -> "LegendreSeries":
        """Keep degrees ``0..n`` inclusive."""
        return LegendreSeries(self.coeffs[: n + 1])

    def __add__(self, other: "LegendreSeries") -> "LegendreSeries":
        n = max(len(self), len(other))
        c = np.zeros(n, dtype=complex)
        c[: len(self)] += self.coeffs
        c[: len(other)] += other.coeffs
        return LegendreSeries(c)

    def __mul__(self, alpha) -> "LegendreSeries":
        return LegendreSeries(alpha * self.coeffs)

    __rmul__ = __mul__


def eval_series(s: LegendreSeries, x):
    """Evaluate ``sum_k s_k p_k(x)`` by Clenshaw's recurrence."""
    x = _check_domain(x)
    c = s.coeffs
    b1 = np.zeros(x.shape, dtype=complex)
    b2 = np.zeros(x.shape, dtype=complex)
    for k in range(c.size - 1, -1, -1):
        a_next = _rec_coeffs(k + 1)[0]
        b_next2 = _rec_coeffs(k + 2)[1]
        b1, b2 = c[k] + a_next * x * b1 - b_next2 * b2, b1
    out = b1 / np.sqrt(2.0)
    return out if out.ndim else complex(out)


def _classical_pair(n: int, x):
    """Classical ``(P_n(x), P_{n-1}(x))`` in whatever precision ``x`` carries."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    return p, p_prev


@lru_cache(maxsize=32)
def _gauss_rule_ld(n: int) -> tuple[np.ndarray, np.ndarray]:
    # Newton on the classical recurrence in extended precision. Only the
    # non-negative half is computed and mirrored, which keeps 1 - x^2 accurate
    # near the endpoints. Double-precision weights lose ~1e-11 relative
    # accuracy there for n ~ 100, which is visible in projected coefficients.
    m = (n + 1) // 2
    i = np.arange(1, m + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5)).astype(_LD)
    if n == 1:
        x = np.zeros(1, dtype=_LD)
    else:
        for _ in range(100):
            pn, pm = _classical_pair(n, x)
            dx = pn * (1 - x) * (1 + x) / (n * (pm - x * pn))
            x = x - dx
            if np.max(np.abs(dx)) < 4 * np.finfo(_LD).eps:
                break
    _, pm = _classical_pair(n, x)
    w = 2 * (1 - x) * (1 + x) / (n * pm) ** 2
    if n % 2:
        x[-1] = 0
    lower = m - n % 2
    nodes = np.concatenate([-x[:lower], x[::-1]])
    weights = np.concatenate([w[:lower], w[::-1]])
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def gauss_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the ``n``-point Gauss-Legendre rule on [-1, 1].

    Nodes are increasing and symmetric about 0; the rule is exact for
    polynomials of degree ``2n - 1``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    x, w = _gauss_rule_ld(int(n))
    return x.astype(float), w.astype(float)


def _sample(f: Callable, x: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(f(x), dtype=complex)
    except (TypeError, ValueError):
        vals = None
    if vals is None or vals.shape != x.shape:
        vals = np.array([complex(f(float(xi))) for xi in x])
    if not np.all(np.isfinite(vals)):
        raise ValueError("function is not finite on [-1, 1]")
    return vals


def project(f: Callable, n: int) -> np.ndarray:
    """Coefficients of degrees ``0..n-1`` from the ``n``-point Gauss rule.

    Accumulation runs in extended precision so that the coefficient noise is
    set by the accuracy of ``f`` rather than by the quadrature.
    """
    xl, wl = _gauss_rule_ld(n)
    fx = _sample(f, xl.astype(float))
    gr = wl * fx.real.astype(_LD)
    gi = wl * fx.imag.astype(_LD)
    out = np.empty(n, dtype=complex)
    p_prev = np.zeros(n, dtype=_LD)
    p = np.full(n, 1 / np.sqrt(_LD(2)))
    for k in range(n):
        if k > 0:
            a = np.sqrt(_LD((2 * k - 1) * (2 * k + 1))) / k
            b = _LD(0) if k == 1 else _LD(k - 1) / k * np.sqrt(_LD(2 * k + 1) / (2 * k - 3))
            p_prev, p = p, a * xl * p - b * p_prev
        out[k] = complex(float(gr @ p), float(gi @ p))
    return out


def fit_series(f: Callable, tol: float = 1e-15, max_degree: int = 4096) -> LegendreSeries:
    """Adaptive Legendre projection of ``f`` on [-1, 1].

    The node count doubles from 32 until two successive projections agree
    and the top half of the spectrum has reached its noise plateau. Trailing
    coefficients whose weighted magnitude ``|c_k| sqrt((2k+1)/2)`` falls
    below ``max(tol * max(1, scale), noise)`` are dropped, where ``scale`` is
    the largest coefficient magnitude and ``noise`` the plateau height.

    Args:
        f: callable of ``t``; array input is tried first, then scalar calls.
        tol: weighted drop tolerance.
        max_degree: largest node count (and series length) attempted.

    Raises:
        FitError: if the budget is exhausted before the tail resolves.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = min(FIT_START_NODES, max_degree)
    prev = None
    while True:
        c = project(f, n)
        a = np.abs(c) * norm_factor(np.arange(n))
        scale = float(np.max(np.abs(c)))
        half = a[n // 2:]
        noise = float(half.max()) if half.size else 0.0
        thr = max(tol * max(1.0, scale), noise)
        if prev is not None:
            m = prev.size
            disagree = float(np.max(np.abs(c[:m] - prev) * norm_factor(np.arange(m))))
            q = n // 4
            flat = a[n // 2: 3 * q].max() <= 10 * a[3 * q:].max() if q else True
            settled = flat or noise <= tol * max(1.0, scale)
            if disagree <= 2 * thr and settled and noise <= FIT_NOISE_CAP * scale + tol:
                break
        if 2 * n > max_degree:
            raise FitError(
                f"Legendre fit did not converge within {max_degree} nodes "
                f"(tail {noise:.3e} vs scale {scale:.3e})"
            )
        prev = c
        n *= 2
    keep = np.nonzero(a > thr)[0]
    if keep.size == 0:
        return LegendreSeries(np.zeros(1), drop_tol=thr)
    return LegendreSeries(c[: keep[-1] + 1], drop_tol=thr)


def antiderivative(s: LegendreSeries) -> LegendreSeries:
    """Series of ``A(t) = int_{-1}^t s``; one term longer than ``s``."""
    c = s.coeffs
    n = c.size
    out = np.zeros(n + 1, dtype=complex)
    out[0] += c[0]
    out[1] += c[0] / np.sqrt(3.0)
    if n > 1:
        ell = np.arange(1, n)
        scale = c[1:] / np.sqrt(2.0 * ell + 1.0)
        out[2:] += scale / np.sqrt(2.0 * ell + 3.0)
        out[: n - 1] -= scale / np.sqrt(2.0 * ell - 1.0)
    return LegendreSeries(out)


def tail_bound(s: LegendreSeries, n: int) -> float:
    """Uniform bound ``sum_{k>n} |s_k| sqrt((2k+1)/2)`` on truncation error."""
    if not 0 <= n < len(s):
        raise ValueError("need 0 <= n < len(s)")
    k = np.arange(n + 1, len(s))
    return float(np.sum(np.abs(s.coeffs[n + 1:]) * norm_factor(k)))
