"""Band-storage matrices and their LU factorization.

Storage follows LAPACK's ``gb`` layout: ``bands[ku + i - j, j] = A[i, j]``.
Factorization and solves call ``?gbtrf`` / ``?gbtrs`` (partial pivoting);
the factor array carries ``kl`` extra rows for pivoting fill-in.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import get_lapack_funcs

from .errors import SingularMatrixError

#: Pivots smaller than this (relative to max |A_ij|) count as singular.
PIVOT_THRESHOLD = 1e-300
MACHINE_EPS = float(np.finfo(float).eps)


def thread_count() -> int:
    """Worker cap from ``STARODE_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("STARODE_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class BandedMatrix:
    """Square matrix with ``kl`` sub- and ``ku`` superdiagonals in band storage."""

    bands: np.ndarray
    kl: int
    ku: int

    def __post_init__(self):
        if self.bands.shape[0] != self.kl + self.ku + 1:
            raise ValueError("bands must have kl + ku + 1 rows")

    @property
    def M(self) -> int:
        return self.bands.shape[1]

    @property
    def dtype(self):
        return self.bands.dtype

    @classmethod
    def from_dense(cls, A, kl: int, ku: int) -> "BandedMatrix":
        """Copy the in-band part of ``A``; entries outside the band are ignored."""
        A = np.asarray(A)
        M = A.shape[0]
        if A.shape != (M, M):
            raise ValueError("matrix must be square")
        kl = min(kl, M - 1)
        ku = min(ku, M - 1)
        bands = np.zeros((kl + ku + 1, M), dtype=A.dtype)
        for off in range(-kl, ku + 1):
            diag = np.diagonal(A, off)
            row = ku - off
            if off >= 0:
                bands[row, off:] = diag
            else:
                bands[row, : M + off] = diag
        return cls(bands, kl, ku)

    def to_dense(self) -> np.ndarray:
        M = self.M
        A = np.zeros((M, M), dtype=self.dtype)
        for off in range(-self.kl, self.ku + 1):
            row = self.ku - off
            if off >= 0:
                A += np.diag(self.bands[row, off:], off)
            else:
                A += np.diag(self.bands[row, : M + off], off)
        return A

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x)
        M = self.M
        y = np.zeros(x.shape, dtype=np.result_type(self.dtype, x.dtype))
        for off in range(-self.kl, self.ku + 1):
            row = self.ku - off
            if off >= 0:
                y[: M - off] += (self.bands[row, off:] * x[off:].T).T
            else:
                y[-off:] += (self.bands[row, : M + off] * x[: M + off].T).T
        return y

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.to_dense()).sum(axis=1)))


@dataclass(frozen=True)
class BandedFactorization:
    lu: np.ndarray
    piv: np.ndarray
    kl: int
    ku: int

    @property
    def M(self) -> int:
        return self.lu.shape[1]


def banded_lu(A: BandedMatrix) -> BandedFactorization:
    """LU with partial pivoting in band storage.

    Raises:
        SingularMatrixError: a pivot is exactly zero or below the
            ``PIVOT_THRESHOLD`` scale.
    """
    kl, ku = A.kl, A.ku
    ab = np.zeros((2 * kl + ku + 1, A.M), dtype=np.result_type(A.dtype, np.float64))
    ab[kl:] = A.bands
    (gbtrf,) = get_lapack_funcs(("gbtrf",), (ab,))
    lu, piv, info = gbtrf(ab, kl, ku)
    if info < 0:
        raise ValueError(f"gbtrf: illegal argument {-info}")
    scale = float(np.max(np.abs(A.bands))) if A.bands.size else 0.0
    diag = np.abs(lu[kl + ku])
    if info > 0 or scale == 0.0 or np.min(diag) < PIVOT_THRESHOLD * scale:
        raise SingularMatrixError("matrix is numerically singular")
    return BandedFactorization(lu, piv, kl, ku)


def solve(fact: BandedFactorization, b, trans: bool = False) -> np.ndarray:
    """Solve ``A x = b`` (or ``A^T x = b``) from a factorization.

    ``b`` may be a vector or a matrix of right-hand sides.
    """
    b = np.asarray(b)
    if b.shape[0] != fact.M:
        raise ValueError(f"dimension mismatch: {b.shape[0]} vs {fact.M}")
    vec = b.ndim == 1
    rhs = b.reshape(fact.M, -1).astype(np.result_type(fact.lu.dtype, b.dtype))
    lu = fact.lu.astype(rhs.dtype, copy=False)
    (gbtrs,) = get_lapack_funcs(("gbtrs",), (lu,))
    x, info = gbtrs(lu, fact.kl, fact.ku, rhs, fact.piv, trans=int(trans))
    if info != 0:
        raise ValueError(f"gbtrs: illegal argument {-info}")
    return x[:, 0] if vec else x


def _as_dense(A) -> np.ndarray:
    if isinstance(A, BandedMatrix):
        return A.to_dense()
    return np.asarray(getattr(A, "entries", A))


def numerical_bandwidth(A, eps: float = MACHINE_EPS) -> int:
    """``max |i - j|`` over entries with ``|A_ij| > eps``; 0 if there are none."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    i, j = np.nonzero(np.abs(_as_dense(A)) > eps)
    return int(np.max(np.abs(i - j))) if i.size else 0


def row_lower_extent(row, i: int, eps: float = MACHINE_EPS) -> int:
    """``i - min{j : |row_j| > eps}`` for row ``i`` of a matrix (0 if none)."""
    js = np.nonzero(np.abs(np.ravel(row)) > eps)[0]
    return max(i - int(js[0]), 0) if js.size else 0


def trailing_bandwidth(A, eps: float = MACHINE_EPS, rows: int = 1) -> int:
    """Lower band extent of the last ``rows`` rows.

    For each row ``i`` this is ``i - min{j : |A_ij| > eps}``; the result is
    the maximum over the trailing rows. Far from the top-left corner the
    band of a resolvent settles to a constant width, which is what this
    measures.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    D = _as_dense(A)
    M = D.shape[0]
    return max(row_lower_extent(D[i], i, eps) for i in range(max(0, M - rows), M))


def identity_minus(F) -> BandedMatrix:
    """``I - F`` in band storage, using ``F.bandwidth`` when available."""
    entries = np.asarray(getattr(F, "entries", F))
    band = getattr(F, "bandwidth", entries.shape[0] - 1)
    A = BandedMatrix.from_dense(-entries, band, band)
    A.bands[A.ku] += 1.0
    return A


def resolvent_columns(F, cols=None, fact: BandedFactorization | None = None) -> np.ndarray:
    """Columns ``cols`` of ``(I - F)^{-1}`` by banded solves against unit vectors.

    Columns are solved in chunks across ``STARODE_THREADS`` workers and
    reassembled in index order. Pass ``fact`` to reuse an existing
    factorization of ``I - F``.
    """
    M = np.asarray(getattr(F, "entries", F)).shape[0]
    cols = np.arange(M) if cols is None else np.asarray(cols, dtype=int)
    if cols.size and (cols.min() < 0 or cols.max() >= M):
        raise IndexError("column index out of range")
    if fact is None:
        fact = banded_lu(identity_minus(F))
    workers = min(thread_count(), max(1, cols.size))
    chunks = np.array_split(cols, workers)

    def run(chunk):
        E = np.zeros((M, chunk.size))
        E[chunk, np.arange(chunk.size)] = 1.0
        return solve(fact, E)

    if workers == 1:
        return run(cols)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(run, chunks))
    return np.concatenate(parts, axis=1)


def resolvent_rows(F, rows, fact: BandedFactorization | None = None) -> np.ndarray:
    """Rows ``rows`` of ``(I - F)^{-1}`` via transposed solves."""
    M = np.asarray(getattr(F, "entries", F)).shape[0]
    rows = np.asarray(rows, dtype=int)
    if fact is None:
        fact = banded_lu(identity_minus(F))
    E = np.zeros((M, rows.size))
    E[rows, np.arange(rows.size)] = 1.0
    return solve(fact, E, trans=True).T
