"""Command-line front end.

``starode solve`` runs one experiment and writes ``report.json``,
``coeffs.csv`` and ``error.csv``; ``starode matrix`` writes the sparsity
patterns of ``F`` and ``U``; ``starode basis`` dumps one ``B^(d)_M``.

Exit codes: 0 success, 2 bad expression or arguments, 3 solver failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ExprError, ExprEvalError, FitError, SingularMatrixError, SolverError
from .exprparse import GRAMMAR, parse
from .legendre import fit_series
from .linalg import MACHINE_EPS, numerical_bandwidth, trailing_bandwidth
from .oracle import DEFAULT_GRID, error_report
from .solver import SolveConfig, TruncationWarning, solution_operator, solve_ode
from .star import basis_matrix, coeff_matrix, heaviside_matrix

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SOLVER = 3
EXIT_IO = 4

FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class RunConfig:
    function: str
    M: int
    fit_tol: float = 1e-15
    band_eps: float = MACHINE_EPS
    grid: int = DEFAULT_GRID
    out: Path = Path(".")

    def solve_config(self) -> SolveConfig:
        return SolveConfig(M=self.M, fit_tol=self.fit_tol, band_eps=self.band_eps)


class _Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _write_csv(path: Path, header: str, rows: np.ndarray, fmt) -> None:
    np.savetxt(path, rows, fmt=fmt, delimiter=",", header=header, comments="")


def _prepare(cfg: RunConfig):
    try:
        expr = parse(cfg.function)
        scfg = cfg.solve_config()
    except ExprError as exc:
        raise _Failure(EXIT_PARSE, f"parse error: {exc}") from exc
    except ValueError as exc:
        raise _Failure(EXIT_PARSE, f"invalid configuration: {exc}") from exc
    if cfg.grid < 2:
        raise _Failure(EXIT_PARSE, "invalid configuration: grid must be >= 2")
    try:
        cfg.out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise _Failure(EXIT_IO, f"cannot create {cfg.out}: {exc}") from exc
    return expr, scfg


def _solver_guard(fn, *args):
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", TruncationWarning)
            return fn(*args)
    except (FitError, SingularMatrixError, SolverError, ExprEvalError) as exc:
        raise _Failure(EXIT_SOLVER, f"solver failure: {exc}") from exc


def cmd_solve(cfg: RunConfig) -> dict:
    """Solve, compare with the oracle, and write the three artifacts."""
    expr, scfg = _prepare(cfg)
    r = _solver_guard(solve_ode, expr, scfg)
    err = _solver_guard(error_report, r, None, cfg.grid)

    trusted = err.coeff_errors[: r.L]
    report = {
        "function": cfg.function,
        "M": r.M,
        "N": r.N,
        "K": r.K,
        "L": r.L,
        "residual": r.residual,
        "fit_tol": cfg.fit_tol,
        "band_eps": cfg.band_eps,
        "grid": cfg.grid,
        "band_F": r.band_F,
        "band_U": r.band_U,
        "band_resolvent": r.band_resolvent,
        "max_coeff_err_trusted": float(trusted.max()) if trusted.size else 0.0,
        "inf_err_trusted": float(err.inf_norm_error[-1]),
        "timings": r.timings,
    }
    k = np.arange(r.M)
    coeffs = np.column_stack([k, np.abs(r.u.coeffs), np.abs(err.oracle.coeffs), err.coeff_errors])
    errors = np.column_stack([np.arange(err.inf_norm_error.size), err.inf_norm_error])
    try:
        (cfg.out / "report.json").write_text(json.dumps(report, indent=2) + "\n")
        _write_csv(cfg.out / "coeffs.csv", "k,abs_u,abs_u_oracle,abs_diff", coeffs,
                   ["%d", FLOAT_FMT, FLOAT_FMT, FLOAT_FMT])
        _write_csv(cfg.out / "error.csv", "n,inf_err", errors, ["%d", FLOAT_FMT])
    except OSError as exc:
        raise _Failure(EXIT_IO, f"write failed: {exc}") from exc
    return report


def cmd_matrix(cfg: RunConfig) -> dict:
    """Write entries of ``F`` and ``U = H (I - F)^{-1}`` above ``band_eps``."""
    expr, scfg = _prepare(cfg)
    series = _solver_guard(fit_series, expr, scfg.fit_tol, scfg.max_degree)
    F = coeff_matrix(series, cfg.M)
    U = _solver_guard(solution_operator, F, heaviside_matrix(cfg.M))
    bands = {
        "N": len(series),
        "band_F": numerical_bandwidth(F, cfg.band_eps),
        "band_U": numerical_bandwidth(U, cfg.band_eps),
        "band_U_trailing": trailing_bandwidth(U, cfg.band_eps),
    }
    try:
        for name, A in (("sparsity_F.csv", F.entries), ("sparsity_U.csv", U)):
            idx = np.argwhere(np.abs(A) > cfg.band_eps)
            _write_csv(cfg.out / name, "i,j", idx, "%d")
    except OSError as exc:
        raise _Failure(EXIT_IO, f"write failed: {exc}") from exc
    return bands


def cmd_basis(d: int, M: int, out: Path) -> Path:
    """Write ``B^(d)_M`` as a dense headerless CSV; returns the file path."""
    if d < 0 or M < 1:
        raise _Failure(EXIT_PARSE, "invalid configuration: need d >= 0 and M >= 1")
    B = basis_matrix(d, M)
    path = Path(out) / f"basis_d{d}_M{M}.csv"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, B.entries, fmt=FLOAT_FMT, delimiter=",")
    except OSError as exc:
        raise _Failure(EXIT_IO, f"write failed: {exc}") from exc
    return path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starode",
        description="Spectral Legendre solver for u'(t) = f(t) u(t), u(-1) = 1 on [-1, 1].",
        epilog="expression grammar for --f:\n" + GRAMMAR
        + "\n\nexit codes: 2 parse/argument error, 3 solver failure, 4 I/O failure",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def run_args(p):
        p.add_argument("--f", required=True, help="expression for f(t), e.g. 'cos(4*t)'")
        p.add_argument("--M", type=int, required=True, help="basis size")
        p.add_argument("--fit-tol", type=float, default=1e-15)
        p.add_argument("--band-eps", type=float, default=MACHINE_EPS)
        p.add_argument("--grid", type=int, default=DEFAULT_GRID)
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")

    run_args(sub.add_parser("solve", help="solve and write report.json, coeffs.csv, error.csv"))
    run_args(sub.add_parser("matrix", help="write sparsity_F.csv and sparsity_U.csv"))
    b = sub.add_parser("basis", help="write one basis matrix B^(d)_M as CSV")
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--M", type=int, required=True)
    b.add_argument("--out", type=Path, default=Path("."), help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "basis":
            print(cmd_basis(args.d, args.M, args.out))
            return EXIT_OK
        cfg = RunConfig(args.f, args.M, args.fit_tol, args.band_eps, args.grid, args.out)
        if args.command == "solve":
            rep = cmd_solve(cfg)
            print(f"N={rep['N']} K={rep['K']} L={rep['L']} residual={rep['residual']:.3e}")
        else:
            bands = cmd_matrix(cfg)
            print(" ".join(f"{k}={v}" for k, v in bands.items()))
    except _Failure as exc:
        print(f"starode: {exc}", file=sys.stderr)
        return exc.code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
