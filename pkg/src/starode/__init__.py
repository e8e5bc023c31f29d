"""Spectral Legendre solver for ``u'(t) = f(t) u(t)`` built on the discrete star-product."""

from .errors import (
    DomainError,
    ExprError,
    ExprEvalError,
    ExprSyntaxError,
    FitError,
    SingularMatrixError,
    SolverError,
    UnknownIdentifierError,
)
from .exprparse import FunctionExpr, eval_expr, parse, to_string
from .legendre import (
    LegendreSeries,
    antiderivative,
    eval_poly,
    eval_series,
    fit_series,
    gauss_nodes,
    tail_bound,
)
from .linalg import (
    BandedFactorization,
    BandedMatrix,
    banded_lu,
    numerical_bandwidth,
    resolvent_columns,
    solve,
)
from .oracle import ErrorReport, error_report, exact_solution, oracle_coeffs
from .solver import SolveConfig, SolveReport, evaluate_solution, rhs_vector, solve_ode
from .star import (
    BasisMatrix,
    StarCoeffMatrix,
    basis_matrix,
    coeff_matrix,
    heaviside_matrix,
    identity_matrix,
    star_product,
    triple_product,
)

__version__ = "0.1.0"
