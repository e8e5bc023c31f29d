"""Expressions for the coefficient function ``f(t)``.

Grammar (whitespace is ignored, multiplication must be written)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?
    primary := number | 'pi' | 'i' | 't' | func '(' expr ')' | '(' expr ')'
    func    := 'sin' | 'cos' | 'exp' | 'sqrt'

``^`` binds tighter than unary minus and is right-associative, so
``-2^2 == -4`` and ``2^3^2 == 512``. Complex values enter only through the
constant ``i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ExprEvalError, ExprSyntaxError, UnknownIdentifierError

GRAMMAR = __doc__.split("Grammar", 1)[1].split("\n\n", 2)[1].rstrip()

FUNCTIONS = ("sin", "cos", "exp", "sqrt")
CONSTANTS = ("pi", "i")
VARIABLE = "t"


@dataclass(frozen=True)
class Num:
    value: float
    text: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Const, Var, Neg, BinOp, Call]


@dataclass(frozen=True)
class FunctionExpr:
    """A parsed expression in ``t``; call it like a function."""

    root: Node
    text: str = ""

    def __call__(self, t):
        return eval_expr(self, t)

    def __str__(self) -> str:
        return to_string(self)


_TOKEN = re.compile(
    r"""\s*(?:
        (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
      | (?P<name>[A-Za-z_]\w*)
      | (?P<op>[-+*/^()])
    )""",
    re.VERBOSE,
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while True:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:]
            stripped = rest.lstrip()
            if not stripped:
                break
            bad = pos + len(rest) - len(stripped)
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", _byte(text, bad))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _byte(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message: str, pos: int | None = None):
        pos = self.tok[2] if pos is None else pos
        return ExprSyntaxError(message, _byte(self.text, pos))

    def accept(self, op: str) -> bool:
        if self.tok[0] == "op" and self.tok[1] == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str):
        if not self.accept(op):
            found = self.tok[1] or "end of input"
            raise self.error(f"expected {op!r}, found {found!r}")

    def parse(self) -> Node:
        node = self.expr()
        if self.tok[0] != "end":
            raise self.error(f"unexpected {self.tok[1]!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.tok[1]
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok[0] == "op" and self.tok[1] in "*/":
            op = self.tok[1]
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        if self.accept("^"):
            return BinOp("^", base, self.unary())
        return base

    def primary(self) -> Node:
        kind, value, pos = self.tok
        if kind == "num":
            self.i += 1
            return Num(float(value), value)
        if kind == "name":
            self.i += 1
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(value, arg)
            if value in CONSTANTS:
                return Const(value)
            if value == VARIABLE:
                return Var()
            raise UnknownIdentifierError(value, _byte(self.text, pos))
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        raise self.error(f"unexpected {value or 'end of input'!r}")


def parse(text: str) -> FunctionExpr:
    """Parse ``text`` into a :class:`FunctionExpr`.

    Raises:
        ExprSyntaxError: malformed input, including implicit multiplication.
        UnknownIdentifierError: a name other than the constants, ``t`` and
            the four functions.
    """
    return FunctionExpr(_Parser(text).parse(), text)


def _is_complex(x) -> bool:
    return np.iscomplexobj(x)


def _divide(a, b):
    if np.any(np.asarray(b) == 0):
        raise ExprEvalError("division by zero")
    return a / b


def _power(a, b):
    if not _is_complex(a) and not _is_complex(b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if np.any((a == 0) & (b < 0)):
            raise ExprEvalError("division by zero")
        if np.all(b == np.round(b)) or np.all(a >= 0):
            return np.power(a, b)
        return np.power(a.astype(complex), b)
    if np.any((np.asarray(a) == 0) & (np.real(b) < 0)):
        raise ExprEvalError("division by zero")
    return np.power(np.asarray(a, dtype=complex), b)


def _sqrt(x):
    if not _is_complex(x) and np.all(np.asarray(x) >= 0):
        return np.sqrt(x)
    return np.sqrt(np.asarray(x, dtype=complex))


_CALLS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "sqrt": _sqrt}
_CONST_VALUES = {"pi": np.pi, "i": 1j}


def _eval(node: Node, t):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return t
    if isinstance(node, Const):
        return _CONST_VALUES[node.name]
    if isinstance(node, Neg):
        return -_eval(node.operand, t)
    if isinstance(node, Call):
        return _CALLS[node.func](_eval(node.arg, t))
    a = _eval(node.left, t)
    b = _eval(node.right, t)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return _divide(a, b)
    return _power(a, b)


def eval_expr(e: FunctionExpr, t):
    """Evaluate at ``t`` (scalar or array); the result is complex.

    Purely real subexpressions are computed in real arithmetic, so a real
    input without ``i`` gives an exactly zero imaginary part.

    Raises:
        ExprEvalError: division by zero.
    """
    t = np.asarray(t, dtype=float)
    with np.errstate(all="ignore"):
        val = np.asarray(_eval(e.root, t), dtype=complex)
    val = np.broadcast_to(val, t.shape).copy() if val.shape != t.shape else val
    return val if val.ndim else complex(val)


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    return 5


def _fmt(node: Node) -> str:
    if isinstance(node, Num):
        return node.text
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Var):
        return VARIABLE
    if isinstance(node, Call):
        return f"{node.func}({_fmt(node.arg)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _prec(node.operand) < 3)
    p = _PREC[node.op]
    if node.op == "^":
        left = _wrap(node.left, _prec(node.left) < 5)
        right = _wrap(node.right, _prec(node.right) < 3)
    else:
        left = _wrap(node.left, _prec(node.left) < p)
        right = _wrap(node.right, _prec(node.right) <= p)
    return f"{left}{node.op}{right}"


def _wrap(node: Node, paren: bool) -> str:
    s = _fmt(node)
    return f"({s})" if paren else s


def to_string(e: Union[FunctionExpr, Node]) -> str:
    """Print with the fewest parentheses that parse back to the same tree."""
    return _fmt(e.root if isinstance(e, FunctionExpr) else e)
