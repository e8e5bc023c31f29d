"""Exception types shared across the package."""

import numpy as np


class DomainError(ValueError):
    """Evaluation point outside [-1, 1]."""


class FitError(RuntimeError):
    """Adaptive Legendre fit exhausted its degree budget."""


class SingularMatrixError(np.linalg.LinAlgError):
    """``I - F`` is numerically singular at this truncation."""


class SolverError(RuntimeError):
    """A solve finished but failed its residual check."""


class ExprError(ValueError):
    """Malformed expression; ``offset`` is the byte offset into the source."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class ExprSyntaxError(ExprError):
    pass


class UnknownIdentifierError(ExprError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r}", offset)
        self.name = name


class ExprEvalError(ArithmeticError):
    """Expression evaluation hit a division by zero."""
