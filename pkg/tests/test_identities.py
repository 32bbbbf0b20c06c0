import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powdet.arith import PolyZ, poly_eval
from powdet.identities import (
    IDENTITY_IDS,
    VERIFIERS,
    PolyFamily,
    catalan_power_coeff,
    count_representations,
    stirling_oracle,
    verify_additive,
    verify_binomial,
    verify_catalan,
    verify_catalan_coefficients,
    verify_degree_claim,
    verify_lemma_polys,
    verify_mina_at_point,
    verify_mina_origin,
    verify_moments,
    verify_representations,
    verify_stirling1,
    verify_stirling2,
    verify_theorem1,
    verify_theorem2_symbolic,
    verify_triangularization,
    verify_weighted,
)
from powdet.matrix import coeff_matrix, det_bareiss, det_cofactor, mina_matrix_origin
from powdet.series import Series, exponent_set, one_plus_x, polynomial, power_exponents

F = Fraction
z = PolyZ.z()

rats = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 9))
nonzero = rats.filter(bool)


def series_with(a0, n):
    return st.lists(rats, min_size=n, max_size=n).map(lambda c: Series((F(a0), *c)))


def squares(n):
    return exponent_set(power_exponents(2, n), n)


# powers f^i


def test_theorem1_squares():
    r = verify_theorem1(squares(7), 7)
    assert r.passed and r.computed == r.expected == "1"


def test_theorem1_cube_of_a1():
    r = verify_theorem1(Series((1, 3, F(-2, 7))), 2)
    assert r.passed and r.computed == "27"


def test_theorem1_non_unit_constant():
    r = verify_theorem1(polynomial([5, 2]), 2)
    assert r.passed and r.computed == "8"


def test_theorem1_zero_constant():
    r = verify_theorem1(Series((0, 3, 1, 4)), 3)
    assert r.passed and r.computed == str(3**6)


@settings(max_examples=40)
@given(st.integers(0, 5).flatmap(lambda n: st.tuples(st.just(n), nonzero, series_with(1, n))))
def test_constant_term_scaling(args):
    n, a0, g = args
    f = Series(tuple(a0 * c for c in g.coeffs))  # a0 * g has constant term a0
    normalized = Series(tuple(c / a0 for c in f.coeffs))
    det_f = det_bareiss(coeff_matrix(f, n))
    assert det_f == det_bareiss(coeff_matrix(normalized, n)) * a0 ** (n * (n + 1) // 2)
    assert verify_theorem1(f, n).passed


# symbolic exponent z


def test_theorem2_examples():
    assert verify_theorem2_symbolic(one_plus_x(1), 1).computed == "z"
    assert verify_theorem2_symbolic(one_plus_x(3), 3).computed == "z^6"
    r = verify_theorem2_symbolic(polynomial([1, 1, 1]), 2)
    assert r.passed and r.computed == "z^3"


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), series_with(1, n))), st.lists(rats, min_size=1, max_size=3))
def test_specialization_commutes(args, zs):
    n, f = args
    r = verify_theorem2_symbolic(f, n, zs)
    assert r.passed, r.notes
    sym = det_bareiss(coeff_matrix(f, n, z))
    for v in zs:
        assert poly_eval(sym, v) == det_bareiss(coeff_matrix(f, n, v))


# triangularization and binomial matrices


def test_triangularization_examples():
    assert verify_triangularization(one_plus_x(4), 4).computed == "[1, 1, 1, 1, 1]"
    assert verify_triangularization(polynomial([1, 2, 7]), 3).computed == "[1, 2, 4, 8]"
    assert verify_triangularization(one_plus_x(2), 2, 3).computed == "[1, 3, 9]"


@pytest.mark.parametrize("n", range(6))
def test_binomial(n):
    r = verify_binomial(n)
    assert r.passed
    assert r.expected == ("1" if n == 0 else f"z^{math.comb(n + 1, 2)}" if n > 1 else "z")


# representations


def test_representation_count_oracle():
    assert count_representations([0, 1, 4], 5, 6) == 30
    # ordered pairs of squares summing to 25: (0,25),(25,0),(9,16),(16,9)
    assert count_representations([0, 1, 4, 9, 16, 25], 2, 25) == 4


def test_representations_squares_and_cubes():
    r = verify_representations(power_exponents(2, 7), 7)
    assert r.passed
    assert verify_representations(power_exponents(3, 6), 6).passed


def test_representations_irregular_set():
    assert verify_representations([0, 1, 3, 7, 12, 20], 6).passed


# Stirling


def test_stirling_oracle():
    assert stirling_oracle("second", 4, 2) == 7
    assert stirling_oracle("first_unsigned", 4, 2) == 11
    for n in range(6):
        assert stirling_oracle("second", n, n) == stirling_oracle("first_unsigned", n, n) == 1
    with pytest.raises(ValueError):
        stirling_oracle("second", 2, 3)
    with pytest.raises(ValueError):
        stirling_oracle("third", 2, 1)


@pytest.mark.parametrize("zv, n, det", [(1, 1, "1/2"), (2, 2, "1"), (3, 2, "27/8")])
def test_stirling2_examples(zv, n, det):
    r = verify_stirling2(zv, n)
    assert r.passed and r.computed == det


def test_stirling1_examples():
    r = verify_stirling1(1, 1)
    assert r.passed and r.computed == "-1/2"
    assert "unsigned-convention det = 1/2" in r.notes
    assert verify_stirling1(2, 0).computed == "1"


@pytest.mark.parametrize("zv", [1, 2, 3])
@pytest.mark.parametrize("n", range(7))
def test_stirling_grid(zv, n):
    assert verify_stirling2(zv, n).passed
    assert verify_stirling1(zv, n).passed


# Catalan


def test_catalan_power_coeff():
    assert catalan_power_coeff(1, 2) == 2
    assert [catalan_power_coeff(1, j) for j in range(6)] == [1, 1, 2, 5, 14, 42]


def test_catalan_coefficients():
    r = verify_catalan_coefficients(10, 10)
    assert r.passed and r.computed == "0"


def test_catalan_examples():
    assert verify_catalan(1, 1).computed == "1"
    r = verify_catalan(2, 3)
    assert r.passed and r.computed == "16"


def test_catalan_needs_positive_size():
    with pytest.raises(ValueError):
        verify_catalan(1, 0)


# additive, weighted, moments


def test_additive_examples():
    r, s = F(2, 3), F(-5)
    rep = verify_additive(polynomial([1, r]), polynomial([1, s]), 1)
    assert rep.passed and rep.computed == "-26/3"
    rep = verify_additive(polynomial([1, 2, 0, 1]), polynomial([1, 3]), 2)
    assert rep.passed and rep.computed == "130"


def test_weighted_examples():
    assert verify_weighted([1], [1], 2).computed == "1"
    assert verify_weighted([1, 2], [1, 1], 1).computed == "6"
    rep = verify_weighted([F(1, 2), F(1, 3)], [2, -1], 2)
    assert rep.passed
    assert rep.computed == "7/27"  # (2 - 1)(1 - 1/3)(1/2 - 1/9)


def test_weighted_length_mismatch():
    with pytest.raises(ValueError):
        verify_weighted([1, 2], [1], 1)


@pytest.mark.parametrize("n", range(9))
def test_moments_uniform(n):
    r = verify_moments(polynomial([1]), n)
    assert r.passed and r.computed == f"1/{math.factorial(n + 1)}" if n else r.computed == "1"


def test_moments_linear_weight():
    r = verify_moments(polynomial([0, 1]), 1)
    assert r.passed and r.computed == "1/6"


# generalized derivative determinant


def test_mina_origin_examples():
    a1 = F(5, 3)
    r = verify_mina_origin(Series((1, a1, 2)), 1, [0, 1])
    assert r.passed and r.computed == "5/3"
    r = verify_mina_origin(polynomial([1, 3, -2, 1]), F(2, 3), [0, F(1, 2), 3])
    assert r.passed and r.computed == "30"


def test_mina_origin_repeated_nodes():
    r = verify_mina_origin(Series((1, 2, 3, 4)), F(1, 2), [1, 1, 3])
    assert r.passed and r.computed == r.expected == "0"


@settings(max_examples=30)
@given(st.integers(0, 5).flatmap(lambda n: st.tuples(st.just(n), series_with(1, n))))
def test_mina_origin_cross_validates_theorem1(args):
    # at xs = 0..n, z = 1, the Mina matrix is the coefficient matrix with column j scaled by j!
    n, f = args
    m = mina_matrix_origin(f, 1, list(range(n + 1)), n)
    scale = math.prod(math.factorial(j) for j in range(n + 1))
    assert det_bareiss(m) == det_bareiss(coeff_matrix(f, n)) * scale
    assert F(verify_mina_origin(f, 1, list(range(n + 1))).computed) == F(verify_theorem1(f, n).computed) * scale


def test_mina_point_examples():
    r = verify_mina_at_point(polynomial([1, 1]), [0, 1, 2], 0)
    assert r.passed and r.computed == "2"
    r = verify_mina_at_point(polynomial([1, 0, 1]), [0, 2, 3], 1)
    assert r.passed and r.computed == "192"


def test_mina_point_negative_exponent():
    r = verify_mina_at_point(polynomial([2, 1, 1]), [0, 1, 2], F(1, 2), 2)
    assert r.passed
    r = verify_mina_at_point(polynomial([3, -1]), [5, 0], 1, 1)
    assert r.passed and r.params["f_exponent"] == "4"


def test_mina_point_negative_total_exponent():
    r = verify_mina_at_point(polynomial([2, -1, 3]), [-3, 0, -1], F(1, 2))
    assert r.passed and r.params["f_exponent"] == "-7"


def test_mina_point_zero_of_f():
    with pytest.raises(ValueError, match="evaluation point is a zero of f"):
        verify_mina_at_point(polynomial([-1, 1]), [0, 1], 1)


def test_mina_point_reproduces_consecutive_case():
    # ms = 0..n: factorials times f'(t)^(n(n+1)/2), no f(t) factor
    f = polynomial([2, 3, 1])
    r = verify_mina_at_point(f, [0, 1, 2, 3], F(1, 3))
    assert r.passed and r.params["f_exponent"] == "0"
    fp_t = 3 + 2 * F(1, 3)
    assert F(r.computed) == 1 * 2 * 6 * fp_t**6


# lemma and degree claim


def test_lemma_examples():
    r = verify_lemma_polys(PolyFamily(([1], [0, 1], [0, 0, 1])), [0, 1, 2])
    assert r.passed and r.computed == "2"
    r = verify_lemma_polys(PolyFamily(([2], [1, 3], [0, 0, 5])), [0, 1, -1])
    assert r.passed and r.computed == "60"
    assert verify_lemma_polys(PolyFamily(([2], [1, 3], [0, 0, 5])), [1, 1, 2]).computed == "0"


def test_poly_family_degree_violation():
    with pytest.raises(ValueError, match="degree violation"):
        PolyFamily(([1], [1, 0], [0, 0, 1]))


def test_degree_claim_examples():
    r = verify_degree_claim(polynomial([1, 1, 1]), 2)
    assert r.passed
    from powdet.series import series_pow_scalar

    assert 2 * series_pow_scalar(Series((1, 1, 1)), z)[2] == z * z + z
    assert r.computed == "[deg 0 lead 1, deg 1 lead 1, deg 2 lead 1]"


# registry


def test_registry_ids():
    assert set(IDENTITY_IDS) >= {"theorem1", "theorem2", "mina-origin", "mina-point", "stirling1", "stirling2"}
    assert VERIFIERS["theorem1"] is verify_theorem1


def test_report_json_shape():
    d = verify_theorem1(polynomial([1, 2]), 2).to_dict()
    assert list(d) == ["identity", "params", "computed", "expected", "pass"]
    assert d["params"] == {"series": "1 + 2*x", "n": "2", "a0": "1"}
    assert "elapsed_ms" in verify_theorem1(polynomial([1, 2]), 2).to_dict(timings=True)


def test_oracle_disagreement_is_caught(monkeypatch):
    import powdet.identities as ids

    monkeypatch.setattr(ids, "det_cofactor", lambda m: det_cofactor(m) + 1)
    r = ids.verify_theorem1(polynomial([1, 2]), 2)
    assert not r.passed and "cofactor" in r.notes[0]
