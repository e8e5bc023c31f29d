"""Discrete star-algebra in the double Legendre basis.

A bivariate kernel ``f(t, s) = g(t) Theta(t - s)`` is represented by the
matrix ``F[k, l] = int int g(tau) Theta(tau - rho) p_k(tau) p_l(rho)``.
Because ``int_{-1}^tau p_l`` is a two-term combination of ``p_{l +/- 1}``,
each entry reduces to integrals of three Legendre polynomials, and
``F = sum_d g_d B^(d)`` with problem-independent banded ``B^(d)``.
Star products, the identity and the resolvent become ordinary matrix
operations on these coefficient matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .legendre import LegendreSeries

_LD = np.longdouble


@lru_cache(maxsize=8)
def _ratio_table(size: int) -> np.ndarray:
    # binom(2n, n) / 4^n, built by its ratio recurrence in extended precision;
    # stays O(1/sqrt(n)) so nothing overflows.
    m = np.arange(1, size, dtype=_LD)
    table = np.ones(size, dtype=_LD)
    table[1:] = np.cumprod((2 * m - 1) / (2 * m))
    return table


def _ratios(max_index: int) -> np.ndarray:
    size = 64
    while size <= max_index:
        size *= 2
    return _ratio_table(size)


def _triple(a, b, c):
    """Vectorized triple product; selection rules applied elementwise."""
    a, b, c = np.broadcast_arrays(*(np.asarray(v, dtype=np.int64) for v in (a, b, c)))
    total = a + b + c
    s = total // 2
    ok = (total % 2 == 0) & (s >= a) & (s >= b) & (s >= c)
    out = np.zeros(a.shape)
    if not np.any(ok):
        return out
    a, b, c, s = a[ok], b[ok], c[ok], s[ok]
    A = _ratios(int(s.max()))
    norm = np.sqrt(_LD(1) * (2 * a + 1) * (2 * b + 1) * (2 * c + 1) / 2)
    val = norm / (2 * s + 1) * A[s - a] * A[s - b] * A[s - c] / A[s]
    out[ok] = val.astype(float)
    return out


def triple_product(a: int, b: int, c: int) -> float:
    """``int_{-1}^{1} p_a p_b p_c`` for orthonormal Legendre polynomials.

    Exactly zero when ``a + b + c`` is odd or the triangle condition fails.
    Otherwise uses the classical closed form
    ``2/(2s+1) * A(s-a) A(s-b) A(s-c) / A(s)`` with ``A(n) = binom(2n, n)/4^n``
    and ``s = (a+b+c)/2``, rescaled to the orthonormal basis.
    """
    if min(a, b, c) < 0:
        raise ValueError("degrees must be non-negative")
    return float(_triple(a, b, c))


@lru_cache(maxsize=1024)
def _product_band(d: int, M: int) -> np.ndarray:
    """``band[o + d, k] = P_{d, k, k + o}`` for ``k < M``, ``0 <= k + o <= M``."""
    k = np.arange(M)
    offsets = np.arange(-d, d + 1)
    j = k[None, :] + offsets[:, None]
    band = _triple(d, k[None, :], np.clip(j, 0, None))
    band[(j < 0) | (j > M)] = 0.0
    band.flags.writeable = False
    return band


def _accumulate_product(G: np.ndarray, d: int, weight) -> None:
    """Add ``weight * [P_{d,k,j}]`` into the ``M x (M+1)`` array ``G`` in place."""
    M = G.shape[0]
    band = _product_band(d, M)
    flat = G.reshape(-1)
    stride = M + 2
    # only offsets with d + o even carry nonzeros
    for o in range(-d, d + 1, 2):
        k0 = max(0, -o)
        k1 = min(M - 1, M - o)
        if k1 < k0:
            continue
        start = k0 * stride + o
        flat[start: start + (k1 - k0) * stride + 1: stride] += weight * band[o + d, k0: k1 + 1]


def _integrate_columns(G: np.ndarray) -> np.ndarray:
    """Map ``[int g p_k p_j]_{j <= M}`` to ``[int g p_k int_{-1}^. p_l]_{l < M}``."""
    M = G.shape[0]
    out = np.empty((M, M), dtype=G.dtype)
    out[:, 0] = G[:, 1] / np.sqrt(3.0) + G[:, 0]
    if M > 1:
        ell = np.arange(1, M)
        out[:, 1:] = (
            G[:, 2: M + 1] / np.sqrt(2.0 * ell + 3.0) - G[:, : M - 1] / np.sqrt(2.0 * ell - 1.0)
        ) / np.sqrt(2.0 * ell + 1.0)
    return out


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class BasisMatrix:
    """Leading ``M x M`` block of the coefficients of ``p_d(t) Theta(t - s)``."""

    d: int
    entries: np.ndarray

    @property
    def M(self) -> int:
        return self.entries.shape[0]

    @property
    def bandwidth(self) -> int:
        return self.d + 1


@dataclass(frozen=True)
class StarCoeffMatrix:
    """Truncated coefficient matrix of an element of the star-algebra.

    ``bandwidth`` is the declared bound on ``|k - l|`` for nonzero entries;
    ``N`` is the length of the generating Legendre series when there is one.
    """

    entries: np.ndarray
    bandwidth: int
    N: int | None = None

    def __post_init__(self):
        e = np.asarray(self.entries)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError("coefficient matrix must be square")
        object.__setattr__(self, "entries", _frozen(e.copy()) if e.flags.writeable else e)

    @property
    def M(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other: "StarCoeffMatrix") -> "StarCoeffMatrix":
        return star_product(self, other)

    def __add__(self, other: "StarCoeffMatrix") -> "StarCoeffMatrix":
        if other.M != self.M:
            raise ValueError("dimension mismatch")
        return StarCoeffMatrix(self.entries + other.entries, max(self.bandwidth, other.bandwidth))


@lru_cache(maxsize=128)
def basis_matrix(d: int, M: int) -> BasisMatrix:
    """``B^(d)_M``, entries ``b_{k,l} = int int p_d(tau) Theta(tau-rho) p_k(tau) p_l(rho)``.

    Column ``l >= 1`` is ``(P_{d,k,l+1}/sqrt(2l+3) - P_{d,k,l-1}/sqrt(2l-1)) / sqrt(2l+1)``;
    column 0 is ``P_{d,k,1}/sqrt(3) + P_{d,k,0}``. Banded with bandwidth ``d + 1``.
    """
    if d < 0 or M < 1:
        raise ValueError("need d >= 0 and M >= 1")
    G = np.zeros((M, M + 1))
    _accumulate_product(G, d, 1.0)
    return BasisMatrix(d, _frozen(_integrate_columns(G)))


def heaviside_matrix(M: int) -> StarCoeffMatrix:
    """Coefficient matrix ``H_M`` of ``Theta(t - s)``; tridiagonal.

    Equal to ``sqrt(2) B^(0)_M`` since the constant 1 is ``sqrt(2) p_0``.
    """
    return coeff_matrix(LegendreSeries([np.sqrt(2.0)]), M)


def identity_matrix(M: int) -> StarCoeffMatrix:
    """The star identity (Dirac delta) discretizes to ``I_M``."""
    return StarCoeffMatrix(np.eye(M), bandwidth=0)


def coeff_matrix(s: LegendreSeries, M: int) -> StarCoeffMatrix:
    """``F^(N)_M = sum_d s_d B^(d)_M`` for ``f(t, s) = (sum_d s_d p_d(t)) Theta(t - s)``.

    Entries are real when ``s`` is. The declared bandwidth is ``N = len(s)``
    (capped at ``M - 1``).
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    c = s.coeffs if not s.is_real else s.coeffs.real
    G = np.zeros((M, M + 1), dtype=c.dtype)
    for d, cd in enumerate(c):
        if cd != 0:
            _accumulate_product(G, d, cd)
    N = len(s)
    return StarCoeffMatrix(_integrate_columns(G), bandwidth=min(N, M - 1), N=N)


def star_product(F: StarCoeffMatrix, G: StarCoeffMatrix) -> StarCoeffMatrix:
    """Coefficient matrix of ``f * g``: the plain product ``F @ G``."""
    if F.M != G.M:
        raise ValueError(f"dimension mismatch: {F.M} vs {G.M}")
    M = F.M
    band = min(F.bandwidth + G.bandwidth, M - 1)
    if 4 * (F.bandwidth + G.bandwidth) < M:
        Q = (sp.csr_array(F.entries) @ sp.csr_array(G.entries)).toarray()
    else:
        Q = F.entries @ G.entries
    return StarCoeffMatrix(Q, bandwidth=band)
