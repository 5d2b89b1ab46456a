import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from huplab.expr import (
    BinOp,
    Call,
    Chi,
    Const,
    EvalDomainError,
    ExprSyntaxError,
    Neg,
    Num,
    Var,
    evaluate,
    evaluate_array,
    parse,
    pretty,
)


def ev(text, t):
    return evaluate(parse(text), t)


class TestParse:
    def test_sin_tree(self):
        assert parse("sin(t)") == Call("sin", Var())
        assert ev("sin(t)", math.pi / 2) == pytest.approx(1.0)

    def test_windowed_density_at_zero(self):
        assert ev("sqrt(cosh(2*t))*sin(t)*chi(-pi,pi)(t)", 0.0) == 0

    def test_power_right_associative(self):
        right = BinOp("^", Num(2.0), BinOp("^", Num(3.0), Num(2.0)))
        assert parse("2^3^2") == right
        assert ev("2^3^2", 0.0) == pytest.approx(512.0)
        left = BinOp("^", BinOp("^", Num(2.0), Num(3.0)), Num(2.0))
        assert evaluate(left, 0.0) == pytest.approx(64.0)

    def test_precedence(self):
        assert ev("2*3+4", 0.0) == 10
        assert ev("2+3*4", 0.0) == 14
        assert ev("-2^2", 0.0) == -4
        assert ev("(-2)^2", 0.0) == 4
        assert ev("2^-1", 0.0) == 0.5

    def test_complex_literal(self):
        assert ev("2+3*i", 0.0) == 2 + 3j

    def test_scientific_notation(self):
        assert ev("2.5e-3", 0.0) == pytest.approx(0.0025)

    def test_empty_rejected(self):
        with pytest.raises(ExprSyntaxError):
            parse("")
        with pytest.raises(ExprSyntaxError):
            parse("   ")

    def test_syntax_error_offset(self):
        with pytest.raises(ExprSyntaxError) as exc:
            parse("sin(t) + $")
        assert exc.value.offset == 9

    def test_unknown_identifier(self):
        with pytest.raises(ExprSyntaxError, match="unknown identifier"):
            parse("tan(t)")

    def test_unbalanced(self):
        with pytest.raises(ExprSyntaxError):
            parse("sin(t")
        with pytest.raises(ExprSyntaxError):
            parse("1+")


class TestEval:
    def test_exp_square(self):
        assert ev("exp(t^2)", 1.0) == pytest.approx(2.718281828459045)

    def test_chi_open_endpoints(self):
        assert ev("chi(0,1)(t)", 0.0) == 0
        assert ev("chi(0,1)(t)", 1.0) == 0
        assert ev("chi(0,1)(t)", 0.5) == 1

    def test_imaginary_factor(self):
        assert ev("i*sin(t)", math.pi / 2) == pytest.approx(1j)

    def test_division_by_zero_reported(self):
        with pytest.raises(EvalDomainError, match="division by zero"):
            ev("1/sin(t)", 0.0)

    def test_log_nonpositive_real(self):
        with pytest.raises(EvalDomainError, match="log of nonpositive real"):
            ev("log(t)", -1.0)
        with pytest.raises(EvalDomainError, match="log"):
            ev("log(t)", 0.0)

    def test_log_of_complex_allowed(self):
        assert ev("log(i)", 0.0) == pytest.approx(1j * math.pi / 2)

    def test_sqrt_of_negative_is_imaginary(self):
        assert ev("sqrt(t)", -4.0) == pytest.approx(2j)

    def test_overflow_reported(self):
        with pytest.raises(EvalDomainError):
            ev("exp(t)", 1e6)

    def test_nonfinite_parameter(self):
        with pytest.raises(EvalDomainError):
            ev("t", math.inf)

    def test_array_matches_scalar(self):
        import numpy as np

        node = parse("sqrt(cosh(2*t))*sin(t)*chi(-pi,pi)(t)")
        ts = np.linspace(-4, 4, 23)
        arr = evaluate_array(node, ts)
        for t, v in zip(ts, arr):
            assert complex(v) == pytest.approx(evaluate(node, float(t)), abs=1e-14)


# hypothesis strategies for expression trees

_leaf = st.one_of(
    st.builds(Num, st.floats(min_value=0.0, max_value=8.0, allow_nan=False)),
    st.just(Var()),
    st.sampled_from([Const("pi"), Const("e"), Const("i")]),
)


def _tree(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(BinOp, st.sampled_from(["+", "-", "*", "/", "^"]), children, children),
        st.builds(Call, st.sampled_from(["sin", "cos", "exp", "cosh", "sinh", "sqrt", "log", "abs"]), children),
        st.builds(Chi, children, children, children),
    )


_any_tree = st.recursive(_leaf, _tree, max_leaves=25)

_safe_leaf = st.one_of(
    st.builds(Num, st.floats(min_value=0.0, max_value=4.0, allow_nan=False)),
    st.just(Var()),
)


def _safe_tree(children):
    # bounded operations only: evaluation can never overflow or hit a domain error
    return st.one_of(
        st.builds(Neg, children),
        st.builds(BinOp, st.sampled_from(["+", "-", "*"]), children, children),
        st.builds(Call, st.sampled_from(["sin", "cos", "abs"]), children),
    )


_bounded_tree = st.recursive(_safe_leaf, _safe_tree, max_leaves=12)


@given(_any_tree)
@settings(max_examples=300)
def test_roundtrip_parse_pretty(tree):
    assert parse(pretty(tree)) == tree


@given(_bounded_tree, _bounded_tree, st.floats(min_value=-3.0, max_value=3.0, allow_nan=False))
@settings(max_examples=200)
def test_eval_additive_multiplicative_homomorphism(a, b, t):
    va, vb = evaluate(a, t), evaluate(b, t)
    assert evaluate(BinOp("+", a, b), t) == pytest.approx(va + vb, abs=1e-12)
    assert evaluate(BinOp("*", a, b), t) == pytest.approx(va * vb, abs=1e-12, rel=1e-12)


@given(_bounded_tree, st.floats(min_value=-3.0, max_value=3.0, allow_nan=False))
@settings(max_examples=150)
def test_eval_deterministic(tree, t):
    assert evaluate(tree, t) == evaluate(tree, t)
