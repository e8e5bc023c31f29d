import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import COS4, OSC
from starode import ExprEvalError, ExprSyntaxError, UnknownIdentifierError, eval_expr, parse, to_string
from starode.exprparse import BinOp, Neg

GRID = np.linspace(-1, 1, 1000)

CORPUS = [
    COS4,
    OSC,
    "t^2",
    "exp(i*pi)",
    "1/(t-2)",
    "-2^2",
    "(-2)^2",
    "2^3^2",
    "(2^3)^2",
    "2^-t",
    "t-(1-t)",
    "t-(1+t)",
    "t/(2*t+3)",
    "t/2/3",
    "t/(2/3)",
    "--t",
    "-(t+1)*3",
    "sqrt(1+t^2)*exp(-t)",
    "sin(2.5e-1*t)+1.0E2",
    ".5*t",
]


@pytest.mark.parametrize(
    "text, t, expected",
    [
        (COS4, 0.0, 1.0),
        (OSC, -1.0, -2j * np.pi * 2.1),
        ("t^2", -0.5, 0.25),
        ("1/(t-2)", 1.0, -1.0),
        ("-2^2", 0.0, -4.0),
        ("2^3^2", 0.0, 512.0),
        ("2*3+4", 0.0, 10.0),
        ("2+3*4", 0.0, 14.0),
        ("8/4/2", 0.0, 1.0),
        ("5-3-1", 0.0, 1.0),
        ("2^-1", 0.0, 0.5),
        ("sqrt(-4)", 0.0, 2j),
        ("  cos ( 4 * t )  ", 0.25, np.cos(1.0)),
    ],
)
def test_eval_examples(text, t, expected):
    assert abs(eval_expr(parse(text), t) - expected) <= 1e-13 * max(1, abs(expected))


def test_euler_identity():
    assert abs(eval_expr(parse("exp(i*pi)"), 0.0) - (-1)) <= 1e-15


def test_real_expression_has_exact_zero_imaginary():
    vals = parse("sqrt(2+t)*cos(4*t)^3-t/(3-t)+(-2)^3").__call__(GRID)
    assert vals.dtype == complex and np.all(vals.imag == 0)


@pytest.mark.parametrize(
    "text, offset",
    [("cos(4 t)", 6), ("2 t", 2), ("(1+t", 4), ("1+", 2), ("t$", 1), ("pi(2)", 2), ("", 0), ("sin t", 4)],
)
def test_syntax_errors(text, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse(text)
    assert info.value.offset == offset


def test_byte_offset_counts_utf8():
    with pytest.raises(ExprSyntaxError) as info:
        parse("t+é")
    assert info.value.offset == 2
    with pytest.raises(ExprSyntaxError) as info:
        parse("é")
    assert info.value.offset == 0


@pytest.mark.parametrize("text, name", [("x+1", "x"), ("2*tan(t)", "tan"), ("e^t", "e")])
def test_unknown_identifier(text, name):
    with pytest.raises(UnknownIdentifierError) as info:
        parse(text)
    assert info.value.name == name


def test_division_by_zero():
    with pytest.raises(ExprEvalError):
        eval_expr(parse("1/(t-1)"), 1.0)
    with pytest.raises(ExprEvalError):
        eval_expr(parse("t^-1"), np.array([0.5, 0.0]))


def test_precedence_tree():
    root = parse("-2^2").root
    assert isinstance(root, Neg) and isinstance(root.operand, BinOp)
    root = parse("2^3^2").root
    assert root.op == "^" and root.right.op == "^"


@pytest.mark.parametrize("text", CORPUS)
def test_roundtrip(text):
    printed = to_string(parse(text))
    assert printed == text.replace(" ", "") or parse(printed).root == parse(text).root
    assert to_string(parse(printed)) == printed


@pytest.mark.parametrize("text", [COS4, OSC, "-2*pi*i*(0.1+cos(6*pi*(t+1))+cos(12*pi*(t+1)))"])
def test_canonical_text_is_fixed_point(text):
    assert to_string(parse(text)) == text


@pytest.mark.parametrize("text", [COS4, OSC])
def test_experiment_functions_finite_on_grid(text):
    assert np.all(np.isfinite(parse(text)(GRID)))


def test_vectorized_matches_scalar():
    e = parse(OSC)
    pts = np.linspace(-1, 1, 9)
    assert np.allclose(e(pts), [e(x) for x in pts], atol=0, rtol=1e-15)


def test_constant_broadcasts():
    assert np.array_equal(parse("3")(GRID), np.full(GRID.shape, 3 + 0j))


# random trees for the printer: build text from a small grammar, then check
# that print -> parse reproduces the tree exactly
atoms = st.sampled_from(["t", "pi", "i", "2", "0.5", "3e-1"])


def _combine(children):
    op = st.sampled_from(["+", "-", "*", "/", "^"])
    wrap = st.sampled_from(["({})", "-{}", "-({})", "sin({})", "exp({})", "({})"])
    return st.one_of(
        st.tuples(children, op, children).map(lambda x: f"({x[0]}){x[1]}({x[2]})"),
        st.tuples(wrap, children).map(lambda x: x[0].format(x[1])),
    )


exprs = st.recursive(atoms, _combine, max_leaves=12)


@settings(max_examples=200, deadline=None)
@given(exprs)
def test_printer_roundtrip_property(text):
    tree = parse(text).root
    printed = to_string(tree)
    assert parse(printed).root == tree
    assert len(printed) <= len(text)
