from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powdet.expr import (
    BinOp,
    Builder,
    Call,
    ExprEvalError,
    ExprSyntaxError,
    Neg,
    Num,
    Pow,
    Var,
    eval_ast,
    parse,
    parse_polynomial,
    parse_series,
    render,
)
from powdet.series import catalan_gf, one_plus_x, power_exponents, exponent_set

F = Fraction
X = Var()


def num(v):
    return Num(F(v))


# parsing


def test_parse_stirling_series():
    assert parse("(exp(x)-1)/x") == BinOp("/", BinOp("-", Call("exp", X), num(1)), X)


def test_parse_sum():
    assert parse("1+x") == BinOp("+", num(1), X)


def test_parse_log_quotient():
    assert parse("log(1+x)/x") == BinOp("/", Call("log", BinOp("+", num(1), X)), X)


def test_whitespace_is_insignificant():
    assert parse("  ( exp ( x ) - 1 ) / x  ") == parse("(exp(x)-1)/x")


def test_left_associativity():
    assert parse("1-x-x") == BinOp("-", BinOp("-", num(1), X), X)
    assert parse("x/2/3") == BinOp("/", BinOp("/", X, num(2)), num(3))


def test_precedence_pow_over_unary_minus():
    assert parse("-x^2") == Neg(Pow(X, F(2)))
    assert parse("1+2*x^2") == BinOp("+", num(1), BinOp("*", num(2), Pow(X, F(2))))


def test_rational_exponents():
    assert parse("(1-4*x)^(1/2)").exponent == F(1, 2)
    assert parse("(1+x)^(-3/2)").exponent == F(-3, 2)
    assert parse("(1+x)^-1").exponent == -1


def test_builders_parse():
    assert parse("catalan") == Builder("catalan")
    assert parse("catalan()") == Builder("catalan")
    assert parse("sumpow(2)") == Builder("sumpow", (2,))
    assert parse("expset(0,1,3,7)") == Builder("expset", (0, 1, 3, 7))


def test_spans_are_recorded():
    ast = parse("1 + exp(x)")
    assert ast.right.span == (4, 10)


@pytest.mark.parametrize(
    "src, offset",
    [("1+", 2), ("(1+x", 4), ("1+*x", 2), ("x^y", 2), ("1 $ x", 2), ("exp x", 4), ("", 0), ("x)", 1)],
)
def test_syntax_error_offsets(src, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse(src)
    assert info.value.offset == offset
    assert f"at offset {offset}" in str(info.value)


def test_unknown_identifier():
    with pytest.raises(ExprSyntaxError, match="unknown identifier"):
        parse("sin(x)")


# evaluation


def test_eval_stirling_series():
    assert parse_series("(exp(x)-1)/x", 2).coeffs == (1, F(1, 2), F(1, 6))


def test_eval_catalan_closed_form():
    assert parse_series("(1-sqrt(1-4*x))/(2*x)", 3).coeffs == (1, 1, 2, 5)


def test_eval_catalan_builder_matches_closed_form():
    assert parse_series("catalan", 8) == parse_series("(1-sqrt(1-4*x))/(2*x)", 8) == catalan_gf(8)


def test_eval_reciprocal_of_x_fails():
    with pytest.raises(ExprEvalError, match="not divisible by x"):
        parse_series("1/x", 3)


def test_eval_error_carries_span():
    with pytest.raises(ExprEvalError) as info:
        parse_series("1 + log(2+x)", 3)
    assert info.value.span == (4, 12)


def test_precedence_evaluation():
    f = parse_series("1+2*x^2", 3)
    assert f[2] == 2 and f[1] == 0


@pytest.mark.parametrize("ord", range(0, 8))
def test_one_plus_x_matches_builder(ord):
    assert parse_series("1+x", ord) == one_plus_x(ord)


def test_mixed_denominator():
    # x / (x (1 + x)) = 1 - x + x^2 - ...
    assert parse_series("x/(x*(1+x))", 4).coeffs == (1, -1, 1, -1, 1)


def test_division_by_constant():
    assert parse_series("(1+x)/2", 1).coeffs == (F(1, 2), F(1, 2))


def test_expset_builders():
    assert parse_series("sumpow(2)", 7) == exponent_set(power_exponents(2, 7), 7)
    assert parse_series("expset(0,1,3)", 4).coeffs == (1, 1, 0, 1, 0)


def test_log_quotient():
    assert parse_series("log(1+x)/x", 3).coeffs == (1, F(-1, 2), F(1, 3), F(-1, 4))


def test_parse_polynomial():
    p = parse_polynomial("(1+x)^3 - x^3")
    assert p.poly and p.coeffs == (1, 3, 3)
    with pytest.raises(ExprEvalError, match="not a polynomial"):
        parse_polynomial("exp(x)")


# round trip on random trees

leaf = st.one_of(
    st.builds(Num, st.builds(Fraction, st.integers(0, 20))),
    st.just(Var()),
    st.builds(Builder, st.just("catalan")),
    st.builds(lambda k: Builder("sumpow", (k,)), st.integers(1, 4)),
    st.lists(st.integers(2, 30), max_size=3, unique=True).map(
        lambda rest: Builder("expset", (0, 1, *sorted(rest)))
    ),
)


def extend(children):
    return st.one_of(
        st.builds(BinOp, st.sampled_from("+-*/"), children, children),
        st.builds(Neg, children),
        st.builds(Pow, children, st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))),
        st.builds(Call, st.sampled_from(["exp", "log", "sqrt"]), children),
    )


trees = st.recursive(leaf, extend, max_leaves=8)


@settings(max_examples=200)
@given(trees)
def test_render_parse_round_trip(ast):
    assert parse(render(ast)) == ast


def test_eval_depends_only_on_tree():
    src = "(1-4*x)^(-1/2)"
    assert eval_ast(parse(src), 5) == eval_ast(parse(render(parse(src))), 5)
    # central binomial coefficients
    assert eval_ast(parse(src), 5).coeffs == (1, 2, 6, 20, 70, 252)
