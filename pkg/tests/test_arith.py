from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powdet.arith import (
    NEG_INF,
    PolyZ,
    parse_rat,
    poly_arith,
    poly_eval,
    poly_scalar_div,
    rat_make,
    render_poly,
    render_rat,
)

rats = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 12))
nonzero_rats = rats.filter(bool)
polys = st.lists(rats, max_size=6).map(PolyZ)

z = PolyZ.z()


@pytest.mark.parametrize(
    "num, den, expected",
    [(6, 4, Fraction(3, 2)), (0, 7, Fraction(0)), (2, -4, Fraction(-1, 2))],
)
def test_rat_make(num, den, expected):
    q = rat_make(num, den)
    assert q == expected
    assert q.denominator > 0


def test_rat_make_canonical_zero():
    q = rat_make(0, 7)
    assert (q.numerator, q.denominator) == (0, 1)


def test_rat_make_zero_denominator():
    with pytest.raises(ZeroDivisionError, match="division by zero"):
        rat_make(1, 0)


@pytest.mark.parametrize("text, value", [("3/4", Fraction(3, 4)), ("-6/4", Fraction(-3, 2)), ("12", Fraction(12))])
def test_parse_rat(text, value):
    assert parse_rat(text) == value


@pytest.mark.parametrize("text", ["1.5", "x", "1/", "", "1/0"])
def test_parse_rat_rejects(text):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_rat(text)


def test_render_rat():
    assert render_rat(Fraction(3, 1)) == "3"
    assert render_rat(Fraction(-1, 2)) == "-1/2"


def test_poly_arith_examples():
    assert poly_arith(z + 1, z - 1, "mul") == PolyZ([-1, 0, 1])
    zero = poly_arith(z**2, -(z**2), "add")
    assert zero.coeffs == () and zero.degree == NEG_INF
    assert poly_arith(2 * z, PolyZ.const(Fraction(1, 2)), "mul") == z


def test_poly_eval_examples():
    assert poly_eval(z**2 - 1, 3) == 8
    p = PolyZ([7, 3, -2])
    assert poly_eval(p, 0) == 7
    assert poly_eval(z * (z - 1) / 2, 5) == 10


def test_poly_scalar_div_examples():
    assert poly_scalar_div(2 * z**2 + 4, 2) == z**2 + 2
    assert poly_scalar_div(z, 3) == PolyZ([0, Fraction(1, 3)])
    assert poly_scalar_div(PolyZ(), 5) == PolyZ()
    with pytest.raises(ZeroDivisionError, match="division by zero"):
        poly_scalar_div(z, 0)


def test_render_poly():
    assert render_poly(z**2 - 1) == "z^2 - 1"
    assert render_poly(PolyZ([0, Fraction(1, 3)])) == "1/3*z"
    assert render_poly(-(z**3) + 2 * z) == "-z^3 + 2*z"
    assert render_poly(PolyZ()) == "0"


def test_exact_div():
    assert (z**2 - 1).exact_div(z - 1) == z + 1
    with pytest.raises(ArithmeticError):
        (z**2 + 1).exact_div(z - 1)


def test_constant_poly_equals_rational():
    assert PolyZ.const(Fraction(3, 2)) == Fraction(3, 2)
    assert hash(PolyZ.const(Fraction(3, 2))) == hash(Fraction(3, 2))
    assert PolyZ() == 0


@given(rats, rats, rats)
def test_rat_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c


@given(polys, polys, rats)
def test_eval_is_ring_homomorphism(p, q, v):
    assert poly_eval(p * q, v) == poly_eval(p, v) * poly_eval(q, v)
    assert poly_eval(p + q, v) == poly_eval(p, v) + poly_eval(q, v)


@given(polys, polys)
def test_degree_of_product(p, q):
    if p and q:
        assert (p * q).degree == p.degree + q.degree


@given(polys, nonzero_rats)
def test_scalar_div_inverts_scaling(p, d):
    assert poly_scalar_div(p * d, d) == p


@settings(max_examples=50)
@given(polys, polys.filter(bool))
def test_exact_div_of_product(p, q):
    assert (p * q).exact_div(q) == p


@given(polys)
def test_canonical_form_has_no_trailing_zero(p):
    assert not p.coeffs or p.coeffs[-1] != 0


def test_poly_eval_accepts_constants():
    assert poly_eval(Fraction(5, 2), 7) == Fraction(5, 2)
