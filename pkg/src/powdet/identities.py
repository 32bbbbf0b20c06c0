"""Verifiers for the determinant identities on powers of a power series.

Each verifier builds its matrix, takes the exact determinant, computes the
closed form independently, and returns a ``Report``. Extra structural
checks (entrywise oracles, cofactor cross-checks) are folded into the same
report; any one failing makes ``passed`` false.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, wraps
from typing import Callable, Sequence

from .arith import PolyZ, poly_eval, render_poly, render_rat, render_value
from .matrix import (
    ExactMatrix,
    binomial_sign_matrix,
    coeff_matrix,
    det_bareiss,
    det_cofactor,
    is_upper_triangular_with_diag,
    mina_matrix_at_point,
    mina_matrix_origin,
    vandermonde_matrix,
    vandermonde_product,
)
from .series import (
    Series,
    catalan_gf,
    derivative,
    evaluate_poly,
    exp_m1_over_x,
    exponent_set,
    log1p_over_x,
    one_plus_x,
    series_coeff,
    series_pow_int,
    series_pow_scalar,
)

# cofactor cross-checks run automatically up to this dimension
ORACLE_DIM = 6


@dataclass
class Report:
    identity: str
    params: dict[str, str]
    computed: str
    expected: str
    passed: bool
    elapsed_ms: float = 0.0
    notes: list[str] = field(default_factory=list)

    def to_dict(self, timings: bool = False) -> dict:
        d = {
            "identity": self.identity,
            "params": dict(self.params),
            "computed": self.computed,
            "expected": self.expected,
            "pass": self.passed,
        }
        if self.notes:
            d["notes"] = list(self.notes)
        if timings:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d


class _Checks:
    """Collects side-condition failures for one report."""

    def __init__(self, oracle: bool):
        self.oracle = oracle
        self.failures: list[str] = []

    def expect(self, ok: bool, what: str) -> bool:
        if not ok:
            self.failures.append(what)
        return ok

    def det(self, m: ExactMatrix, what: str = "matrix"):
        d = det_bareiss(m)
        if self.oracle and m.rows <= ORACLE_DIM:
            c = det_cofactor(m)
            self.expect(c == d, f"{what}: bareiss {render_value(d)} != cofactor {render_value(c)}")
        return d

    def report(self, identity: str, params: dict, computed, expected, notes=()) -> Report:
        ok = computed == expected and not self.failures
        return Report(
            identity=identity,
            params={k: render_param(v) for k, v in params.items()},
            computed=render_param(computed),
            expected=render_param(expected),
            passed=ok,
            notes=list(notes) + self.failures,
        )


def render_param(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(render_param(x) for x in v) + "]"
    if isinstance(v, (int, Fraction, PolyZ)):
        return render_value(v)
    return str(v)


VERIFIERS: dict[str, Callable[..., Report]] = {}


def verifier(name: str):
    """Register under a stable id and record wall time on the report."""

    def deco(fn):
        @wraps(fn)
        def run(*args, **kwargs) -> Report:
            t0 = time.perf_counter()
            rep = fn(*args, **kwargs)
            rep.elapsed_ms = (time.perf_counter() - t0) * 1000.0
            return rep

        VERIFIERS[name] = run
        run.identity = name
        return run

    return deco


def _tri(n: int) -> int:
    return n * (n + 1) // 2


def _a1(f: Series):
    # an order-0 series only ever meets n = 0, where a1 enters as a1^0
    return f.known(1) if f.ord >= 1 or f.poly else Fraction(0)


def _describe(f: Series, label: str | None) -> str:
    return label if label is not None else str(f)


# powers of a single series


@verifier("theorem1")
def verify_theorem1(f: Series, n: int, *, oracle: bool = True, label: str | None = None) -> Report:
    """``det([x^j] f^i)_{0..n} = a1^(n(n+1)/2)`` for any constant term."""
    chk = _Checks(oracle)
    c = coeff_matrix(f, n, 1)
    det = chk.det(c)
    expected = _a1(f) ** _tri(n)
    return chk.report(
        "theorem1", {"series": _describe(f, label), "n": n, "a0": series_coeff(f, 0)}, det, expected
    )


@verifier("theorem2")
def verify_theorem2_symbolic(
    f: Series,
    n: int,
    zs: Sequence[Fraction] = (),
    *,
    oracle: bool = True,
    label: str | None = None,
) -> Report:
    """Symbolic ``det([x^j] f^(z i)) = (z a1)^(n(n+1)/2)`` as polynomials in z.

    For every rational in ``zs`` the symbolic determinant, evaluated there,
    must also equal the determinant of the numerically built matrix.
    """
    chk = _Checks(oracle)
    z = PolyZ.z()
    det = chk.det(coeff_matrix(f, n, z))
    a1 = _a1(f)
    expected = (z * a1) ** _tri(n)
    for v in zs:
        numeric = det_bareiss(coeff_matrix(f, n, Fraction(v)))
        chk.expect(
            poly_eval(det, v) == numeric,
            f"specialization at z={render_rat(v)}: {render_rat(poly_eval(det, v))} != {render_rat(numeric)}",
        )
    params = {"series": _describe(f, label), "n": n}
    if zs:
        params["zs"] = list(zs)
    return chk.report("theorem2", params, det, expected)


def binomial_poly(top: PolyZ, j: int) -> PolyZ:
    """``C(top, j) = prod_{l<j} (top - l) / j!`` as a polynomial."""
    acc = PolyZ.const(1)
    for ell in range(j):
        acc = acc * (top - ell)
    return acc / math.factorial(j)


@verifier("binomial")
def verify_binomial(n: int, *, oracle: bool = True) -> Report:
    """``det(C(z i, j)) = z^C(n+1, 2)``, with entries cross-checked against the
    coefficient matrix of ``(1+x)^(z i)``."""
    chk = _Checks(oracle)
    z = PolyZ.z()
    m = ExactMatrix.build(n + 1, n + 1, lambda i, j: binomial_poly(z * i, j))
    chk.expect(m == coeff_matrix(one_plus_x(n), n, z), "C(zi, j) != [x^j](1+x)^(zi)")
    det = chk.det(m)
    return chk.report("binomial", {"n": n}, det, z ** math.comb(n + 1, 2))


@verifier("triangularization")
def verify_triangularization(f: Series, n: int, z=1, *, oracle: bool = True, label: str | None = None) -> Report:
    """``b c`` is upper triangular with diagonal ``(z a1)^i``."""
    chk = _Checks(oracle)
    z = Fraction(z)
    bc = binomial_sign_matrix(n) @ coeff_matrix(f, n, z)
    a1 = _a1(f)
    diag = [(z * a1) ** i for i in range(n + 1)]
    ok = is_upper_triangular_with_diag(bc, diag)
    computed = [bc[i, i] for i in range(n + 1)] if ok else "not upper triangular with that diagonal"
    return chk.report(
        "triangularization", {"series": _describe(f, label), "n": n, "z": z}, computed, diag
    )


# representation counts, Stirling and Catalan tables


def count_representations(members: Sequence[int], parts: int, total: int) -> int:
    """Number of ordered ``parts``-tuples from ``members`` summing to ``total``.

    Plain enumeration with pruning on the running sum; independent of any
    series arithmetic.
    """
    usable = sorted(s for s in members if s <= total)

    def walk(left: int, remaining: int) -> int:
        if left == 0:
            return 1 if remaining == 0 else 0
        count = 0
        for s in usable:
            if s > remaining:
                break
            count += walk(left - 1, remaining - s)
        return count

    return walk(parts, total)


@verifier("representations")
def verify_representations(
    exponents: Sequence[int], n: int, *, oracle: bool = True, label: str | None = None
) -> Report:
    """Representation-count matrix: entries by enumeration and by series
    powers must agree, and every leading principal minor is 1."""
    chk = _Checks(oracle)
    exponents = list(exponents)
    members = [s for s in exponents if s <= n] or [0]
    f = exponent_set(exponents, n)
    c = coeff_matrix(f, n, 1)
    for i in range(n + 1):
        for j in range(n + 1):
            cnt = count_representations(members, i, j)
            chk.expect(c[i, j] == cnt, f"entry ({i},{j}): series {c[i, j]} != count {cnt}")
    minors = [chk.det(c.leading_minor(k + 1), f"minor {k}") for k in range(n + 1)]
    name = label if label is not None else "{" + ",".join(map(str, members)) + ",...}"
    return chk.report("representations", {"exponents": name, "n": n}, minors, [Fraction(1)] * (n + 1))


@lru_cache(maxsize=None)
def _stirling(kind: str, n: int, k: int) -> int:
    if n == 0 or k == 0:
        return 1 if n == k else 0
    if k > n:
        return 0
    rest = _stirling(kind, n - 1, k - 1)
    if kind == "second":
        return k * _stirling(kind, n - 1, k) + rest
    return (n - 1) * _stirling(kind, n - 1, k) + rest


def stirling_oracle(kind: str, n: int, k: int) -> int:
    """Stirling numbers by their triangular recurrences.

    ``kind`` is ``"second"`` for S(n, k) or ``"first_unsigned"`` for c(n, k).
    """
    if kind not in ("second", "first_unsigned"):
        raise ValueError(f"unknown Stirling kind {kind!r}")
    if not 0 <= k <= n:
        raise ValueError(f"Stirling index out of range: n={n}, k={k}")
    return _stirling(kind, n, k)


def _stirling_entry(kind: str, m: int, j: int, signed: bool) -> Fraction:
    s = stirling_oracle(kind, m + j, m)
    if signed:
        s *= (-1) ** j
    return Fraction(math.factorial(m) * s, math.factorial(m + j))


@verifier("stirling2")
def verify_stirling2(z: int, n: int, *, oracle: bool = True) -> Report:
    """``det((zi)!/(zi+j)! S(zi+j, zi)) = (z/2)^(n(n+1)/2)``."""
    chk = _Checks(oracle)
    table = ExactMatrix.build(n + 1, n + 1, lambda i, j: _stirling_entry("second", z * i, j, False))
    chk.expect(table == coeff_matrix(exp_m1_over_x(n), n, z), "table != [x^j]((e^x-1)/x)^(zi)")
    det = chk.det(table)
    return chk.report("stirling2", {"z": z, "n": n}, det, Fraction(z, 2) ** _tri(n))


@verifier("stirling1")
def verify_stirling1(z: int, n: int, *, oracle: bool = True) -> Report:
    """First-kind analogue.

    With signed numbers ``s(N, m) = (-1)^(N-m) c(N, m)`` the table equals
    ``[x^j](log(1+x)/x)^(zi)`` and its determinant is ``(-z/2)^(n(n+1)/2)``.
    With unsigned numbers each column ``j`` flips by ``(-1)^j`` and the
    determinant is exactly ``(z/2)^(n(n+1)/2)``; both are checked.
    """
    chk = _Checks(oracle)
    signed = ExactMatrix.build(n + 1, n + 1, lambda i, j: _stirling_entry("first_unsigned", z * i, j, True))
    unsigned = ExactMatrix.build(n + 1, n + 1, lambda i, j: _stirling_entry("first_unsigned", z * i, j, False))
    chk.expect(signed == coeff_matrix(log1p_over_x(n), n, z), "signed table != [x^j](log(1+x)/x)^(zi)")
    det = chk.det(signed, "signed table")
    det_u = chk.det(unsigned, "unsigned table")
    closed_form = Fraction(z, 2) ** _tri(n)
    chk.expect(det_u == closed_form, f"unsigned det {render_rat(det_u)} != {render_rat(closed_form)}")
    return chk.report(
        "stirling1",
        {"z": z, "n": n, "convention": "signed"},
        det,
        Fraction(-z, 2) ** _tri(n),
        notes=[f"unsigned-convention det = {render_rat(det_u)}"],
    )


def catalan_power_coeff(k: int, j: int) -> Fraction:
    """``[x^j] C(x)^k = k (2j+k-1)! / (j! (k+j)!)`` for ``k >= 1``."""
    return Fraction(k * math.factorial(2 * j + k - 1), math.factorial(j) * math.factorial(k + j))


def _catalan_numbers(count: int) -> list[int]:
    c = [1]
    for m in range(count - 1):
        c.append(sum(c[i] * c[m - i] for i in range(m + 1)))
    return c


def _convolve(a: list[int], b: list[int], size: int) -> list[int]:
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(size)]


@verifier("catalan-coeff")
def verify_catalan_coefficients(kmax: int = 10, jmax: int = 10, *, oracle: bool = True) -> Report:
    """Closed form for ``[x^j] C^k`` against integer convolution powers of the
    recurrence-built Catalan numbers, and against the series engine."""
    chk = _Checks(oracle)
    cat = _catalan_numbers(jmax + 1)
    power = [1] + [0] * jmax
    gf = catalan_gf(jmax)
    bad = 0
    for k in range(1, kmax + 1):
        power = _convolve(power, cat, jmax + 1)
        engine = series_pow_int(gf, k)
        for j in range(1, jmax + 1):
            formula = catalan_power_coeff(k, j)
            if not (chk.expect(formula == power[j], f"k={k}, j={j}: formula {formula} != oracle {power[j]}")
                    and chk.expect(engine[j] == power[j], f"k={k}, j={j}: series {engine[j]} != oracle {power[j]}")):
                bad += 1
    return chk.report("catalan-coeff", {"kmax": kmax, "jmax": jmax}, bad, 0)


@verifier("catalan")
def verify_catalan(z: int, n: int, *, oracle: bool = True) -> Report:
    """``det((2j + zk - 1)!/(zk + j)!)_{j,k=1..n} = z^C(n,2) 1! 2! ... (n-1)!``.

    The normalized matrix ``[x^j] C^(zk)`` (same indices) is checked
    against the series engine and must have determinant ``z^(n(n+1)/2)``.
    """
    if n < 1:
        raise ValueError("catalan identity needs n >= 1")
    chk = _Checks(oracle)
    raw = ExactMatrix.build(
        n, n, lambda j, k: Fraction(math.factorial(2 * (j + 1) + z * (k + 1) - 1),
                                    math.factorial(z * (k + 1) + j + 1)))
    norm = ExactMatrix.build(n, n, lambda j, k: catalan_power_coeff(z * (k + 1), j + 1))
    full = coeff_matrix(catalan_gf(n), n, z)
    engine = ExactMatrix.build(n, n, lambda j, k: full[k + 1, j + 1])
    chk.expect(norm == engine, "k(2j+k-1)!/(j!(k+j)!) != [x^j]C^k")
    det_norm = chk.det(norm, "normalized matrix")
    chk.expect(det_norm == Fraction(z) ** _tri(n),
               f"normalized det {render_rat(det_norm)} != z^{_tri(n)}")
    det = chk.det(raw)
    expected = Fraction(z) ** math.comb(n, 2) * math.prod(math.factorial(m) for m in range(1, n))
    return chk.report("catalan", {"z": z, "n": n}, det, expected,
                      notes=[f"normalized det = {render_rat(det_norm)}"])


# sums of coefficient matrices


@verifier("additive")
def verify_additive(f: Series, g: Series, n: int, *, oracle: bool = True,
                    label: tuple[str, str] | None = None) -> Report:
    """``det(u + v) = prod_i (f'(0)^i + g'(0)^i)``."""
    chk = _Checks(oracle)
    det = chk.det(coeff_matrix(f, n, 1) + coeff_matrix(g, n, 1))
    a, b = _a1(f), _a1(g)
    expected = math.prod((a**i + b**i for i in range(n + 1)), start=Fraction(1))
    lf, lg = label if label is not None else (str(f), str(g))
    return chk.report("additive", {"f": lf, "g": lg, "n": n}, det, expected)


def binomial_rat(top: Fraction, j: int) -> Fraction:
    acc = Fraction(1)
    for ell in range(j):
        acc *= top - ell
    return acc / math.factorial(j)


@verifier("weighted")
def verify_weighted(points: Sequence, weights: Sequence, n: int, *, oracle: bool = True) -> Report:
    """``det(sum_r c(r) C(r i, j)) = prod_j sum_r c(r) r^j``."""
    if len(points) != len(weights):
        raise ValueError("points and weights must have equal length")
    chk = _Checks(oracle)
    pts = [Fraction(r) for r in points]
    ws = [Fraction(c) for c in weights]
    m = ExactMatrix.build(
        n + 1, n + 1, lambda i, j: sum((c * binomial_rat(r * i, j) for r, c in zip(pts, ws)), Fraction(0))
    )
    det = chk.det(m)
    expected = math.prod(
        (sum((c * r**j for r, c in zip(pts, ws)), Fraction(0)) for j in range(n + 1)), start=Fraction(1)
    )
    return chk.report("weighted", {"S": pts, "c": ws, "n": n}, det, expected)


def integrate_unit(p: PolyZ) -> Fraction:
    """Exact integral over ``[0, 1]`` of a polynomial."""
    return sum((c / (k + 1) for k, c in enumerate(p.coeffs)), Fraction(0))


def moment(fp: Sequence[Fraction], j: int) -> Fraction:
    """``mu_j = int_0^1 x^j f(x) dx = sum_k f_k / (j + k + 1)``."""
    return sum((Fraction(c) / (j + k + 1) for k, c in enumerate(fp)), Fraction(0))


@verifier("moments")
def verify_moments(fp: Series, n: int, *, oracle: bool = True, label: str | None = None) -> Report:
    """``det(int_0^1 f(x) C(x i, j) dx) = prod_j mu_j(f)``."""
    if not fp.poly:
        raise ValueError("moments identity needs a polynomial f")
    chk = _Checks(oracle)
    weight = PolyZ(fp.coeffs)
    x = PolyZ.z()  # plain indeterminate, playing the role of x here
    m = ExactMatrix.build(n + 1, n + 1, lambda i, j: integrate_unit(weight * binomial_poly(x * i, j)))
    det = chk.det(m)
    expected = math.prod((moment(fp.coeffs, j) for j in range(n + 1)), start=Fraction(1))
    return chk.report("moments", {"f": _describe(fp, label), "n": n}, det, expected)


# generalized determinant of derivatives


@verifier("mina-origin")
def verify_mina_origin(f: Series, z, xs: Sequence, n: int | None = None, *, oracle: bool = True,
                       label: str | None = None) -> Report:
    """``det(D^j f^(z x_i))|_0 = (z a1)^(n(n+1)/2) prod_{i<j}(x_j - x_i)`` for f(0) = 1."""
    n = len(xs) - 1 if n is None else n
    chk = _Checks(oracle)
    z = Fraction(z)
    xs = [Fraction(v) for v in xs]
    det = chk.det(mina_matrix_origin(f, z, xs, n))
    expected = (z * _a1(f)) ** _tri(n) * vandermonde_product(xs)
    return chk.report("mina-origin", {"series": _describe(f, label), "z": z, "xs": xs, "n": n},
                      det, expected)


@verifier("mina-point")
def verify_mina_at_point(fp: Series, ms: Sequence[int], t, n: int | None = None, *,
                         oracle: bool = True, label: str | None = None) -> Report:
    """``det(D^j f^(m_i))|_t = f(t)^(sum(m_i - i)) f'(t)^(n(n+1)/2) prod_{i<j}(m_j - m_i)``."""
    n = len(ms) - 1 if n is None else n
    t = Fraction(t)
    ft = evaluate_poly(fp, t)
    if ft == 0:
        raise ValueError("evaluation point is a zero of f")
    chk = _Checks(oracle)
    det = chk.det(mina_matrix_at_point(fp, ms, t, n))
    shift = sum(ms) - _tri(n)
    expected = ft ** shift * evaluate_poly(derivative(fp), t) ** _tri(n) * vandermonde_product(ms)
    return chk.report(
        "mina-point",
        {"f": _describe(fp, label), "ms": list(ms), "t": t, "n": n, "f_exponent": shift},
        det,
        expected,
    )


@dataclass(frozen=True)
class PolyFamily:
    """Polynomials ``p_0 .. p_n`` with ``deg p_j == j`` exactly."""

    polys: tuple[PolyZ, ...]

    def __post_init__(self):
        polys = tuple(p if isinstance(p, PolyZ) else PolyZ(p) for p in self.polys)
        for j, p in enumerate(polys):
            if p.degree != j:
                raise ValueError(f"degree violation: p_{j} has degree {p.degree}, expected {j}")
        object.__setattr__(self, "polys", polys)

    @property
    def leading_coeffs(self) -> list[Fraction]:
        return [p.leading for p in self.polys]

    def __len__(self):
        return len(self.polys)


@verifier("lemma1")
def verify_lemma_polys(ps: PolyFamily, xs: Sequence, *, oracle: bool = True) -> Report:
    """``det(p_j(x_i)) = (prod of leading coefficients) * prod_{i<j}(x_j - x_i)``,
    plus the factorization ``Q = A V`` with ``A`` lower triangular."""
    if len(ps) != len(xs):
        raise ValueError("need as many nodes as polynomials")
    chk = _Checks(oracle)
    xs = [Fraction(v) for v in xs]
    n = len(xs)
    q = ExactMatrix.build(n, n, lambda j, i: ps.polys[j](xs[i]))
    a = ExactMatrix.build(n, n, lambda j, k: ps.polys[j].coeff(k))
    chk.expect(a @ vandermonde_matrix(xs) == q, "Q != A V")
    det = chk.det(q)
    expected = math.prod(ps.leading_coeffs, start=Fraction(1)) * vandermonde_product(xs)
    return chk.report("lemma1", {"polys": [render_poly(p, "x") for p in ps.polys], "xs": xs},
                      det, expected)


@verifier("degree-claim")
def verify_degree_claim(f: Series, n: int, *, oracle: bool = True, label: str | None = None) -> Report:
    """``j! [x^j] f^w`` has exact degree ``j`` in ``w`` with leading coefficient ``a1^j``."""
    chk = _Checks(oracle)
    w = PolyZ.z()
    p = series_pow_scalar(f.truncated(n), w)
    a1 = _a1(f)
    got = []
    for j in range(n + 1):
        q = math.factorial(j) * p[j]
        q = q if isinstance(q, PolyZ) else PolyZ.const(q)
        got.append((q.degree, q.leading))
    computed = [f"deg {d} lead {render_value(c)}" if d >= 0 else "zero" for d, c in got]
    expected = [f"deg {j} lead {render_value(Fraction(a1) ** j)}" for j in range(n + 1)]
    return chk.report("degree-claim", {"series": _describe(f, label), "n": n}, computed, expected)


IDENTITY_IDS = tuple(VERIFIERS)
