"""Truncated formal power series over ``Fraction`` or ``PolyZ`` coefficients.

A ``Series`` stores the coefficients of ``x**0 .. x**ord`` exactly.
Anything past ``ord`` is unknown and reading it is an error. Series built
with ``poly=True`` are genuine polynomials: every coefficient beyond
``ord`` is zero, so they can be padded to any order on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import PolyZ, as_nonneg_int, canonical, render_value

ZERO = Fraction(0)
ONE = Fraction(1)


class SeriesError(ValueError):
    """A series operation was called outside its precondition."""


@dataclass(frozen=True)
class Series:
    coeffs: tuple
    poly: bool = False

    def __post_init__(self):
        if not self.coeffs:
            raise SeriesError("a series needs at least one coefficient")
        c = [canonical(a) for a in self.coeffs]
        if self.poly:
            while len(c) > 1 and c[-1] == 0:
                c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def ord(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        return series_coeff(self, k)

    def known(self, k: int):
        """Coefficient ``k``, zero past the end of a polynomial."""
        if k <= self.ord:
            return self.coeffs[k]
        if self.poly:
            return ZERO
        raise SeriesError(
            f"insufficient truncation order: need x^{k}, have order {self.ord}"
        )

    def truncated(self, ord: int) -> "Series":
        """The plain truncated series at order ``ord``.

        Polynomials can be read at any order; other series only at or below
        their own.
        """
        if ord == self.ord and not self.poly:
            return self
        return Series(tuple(self.known(k) for k in range(ord + 1)))

    def __add__(self, other):
        return series_add(self, _coerce(other, self))

    __radd__ = __add__

    def __sub__(self, other):
        return series_add(self, series_scale(_coerce(other, self), -1))

    def __rsub__(self, other):
        return series_add(_coerce(other, self), series_scale(self, -1))

    def __neg__(self):
        return series_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, Series):
            return series_mul(self, other)
        return series_scale(self, other)

    __rmul__ = __mul__

    def __pow__(self, m):
        k = as_nonneg_int(m)
        if k is not None:
            return series_pow_int(self, k)
        return series_pow_scalar(self, m)

    def __str__(self):
        return render_series(self)


def _coerce(v, like: Series) -> Series:
    if isinstance(v, Series):
        return v
    return Series((v,), poly=True)


def series_coeff(f: Series, k: int):
    """Return ``[x^k] f``."""
    if k < 0:
        raise SeriesError("coefficient index must be nonnegative")
    if k > f.ord:
        raise SeriesError(
            f"insufficient truncation order: need x^{k}, have order {f.ord}"
        )
    return f.coeffs[k]


def _result_order(f: Series, g: Series) -> tuple[int, bool]:
    if f.poly and g.poly:
        return max(f.ord, g.ord), True
    if f.poly:
        return g.ord, False
    if g.poly:
        return f.ord, False
    return min(f.ord, g.ord), False


def series_add(f: Series, g: Series) -> Series:
    n, poly = _result_order(f, g)
    return Series(tuple(f.known(k) + g.known(k) for k in range(n + 1)), poly)


def series_scale(f: Series, c) -> Series:
    return Series(tuple(a * c for a in f.coeffs), f.poly)


def series_mul(f: Series, g: Series) -> Series:
    """Cauchy product.

    Two polynomials multiply exactly; otherwise the result is truncated at
    the smaller non-polynomial order.
    """
    if f.poly and g.poly:
        n, poly = f.ord + g.ord, True
    else:
        n, poly = _result_order(f, g)
    a = [f.known(k) for k in range(n + 1)]
    b = [g.known(k) for k in range(n + 1)]
    out = []
    for k in range(n + 1):
        acc = ZERO
        for i in range(k + 1):
            x = a[i]
            if x == 0:
                continue
            y = b[k - i]
            if y == 0:
                continue
            acc = acc + x * y
        out.append(acc)
    return Series(tuple(out), poly)


def one(ord: int, poly: bool = False) -> Series:
    return Series((ONE,) + (ZERO,) * ord, poly)


def series_pow_int(f: Series, m: int) -> Series:
    """``f**m`` by repeated squaring; ``f**0`` is one at ``ord(f)``."""
    if m < 0:
        raise SeriesError("integer power must be nonnegative")
    result = one(0 if f.poly else f.ord, f.poly)
    base = f
    while m:
        if m & 1:
            result = series_mul(result, base)
        m >>= 1
        if m:
            base = series_mul(base, base)
    return result


def series_log(f: Series) -> Series:
    if f.coeffs[0] != 1:
        raise SeriesError("log requires unit constant term")
    n = f.ord
    a = f.coeffs
    # f * g' = f'  =>  k g_k = k a_k - sum_{i=1}^{k-1} i g_i a_{k-i}
    g = [ZERO] * (n + 1)
    for k in range(1, n + 1):
        acc = k * a[k]
        for i in range(1, k):
            if a[k - i] != 0:
                acc = acc - i * g[i] * a[k - i]
        g[k] = acc / k
    return Series(tuple(g))


def series_exp(f: Series) -> Series:
    if f.coeffs[0] != 0:
        raise SeriesError("exp requires zero constant term")
    n = f.ord
    g = f.coeffs
    # h' = g' h  =>  k h_k = sum_{i=1}^{k} i g_i h_{k-i}
    h = [ONE] + [ZERO] * n
    for k in range(1, n + 1):
        acc = ZERO
        for i in range(1, k + 1):
            if g[i] != 0:
                acc = acc + i * g[i] * h[k - i]
        h[k] = acc / k
    return Series(tuple(h))


def series_pow_scalar(f: Series, c) -> Series:
    """``f**c = exp(c log f)`` for a rational or polynomial exponent ``c``."""
    if f.coeffs[0] != 1:
        raise SeriesError("fractional power requires unit constant term")
    lg = series_log(f)
    return series_exp(Series(tuple(c * a for a in lg.coeffs)))


def series_pow(f: Series, e) -> Series:
    """Integer power when ``e`` is a nonnegative integer, else ``exp(e log f)``."""
    m = as_nonneg_int(e)
    if m is not None:
        return series_pow_int(f, m)
    return series_pow_scalar(f, e)


def series_div_x_pow(f: Series, k: int) -> Series:
    if k <= 0:
        raise SeriesError("shift must be a positive integer")
    if any(f.known(i) != 0 for i in range(k)):
        raise SeriesError(f"not divisible by x^{k}")
    if f.poly:
        return Series(f.coeffs[k:] or (ZERO,), True)
    if f.ord < k:
        raise SeriesError(
            f"insufficient truncation order: need x^{k}, have order {f.ord}"
        )
    return Series(f.coeffs[k:])


def lowest_term(f: Series) -> int | None:
    """Index of the first nonzero stored coefficient."""
    for k, c in enumerate(f.coeffs):
        if c != 0:
            return k
    return None


def taylor_shift(f: Series, t) -> Series:
    """Return ``g`` with ``g(u) = f(t + u)`` for a polynomial ``f``."""
    if not f.poly:
        raise SeriesError("taylor_shift needs a polynomial series")
    n = f.ord
    a = f.coeffs
    out = []
    for k in range(n + 1):
        acc = ZERO
        for m in range(k, n + 1):
            if a[m] != 0:
                acc = acc + a[m] * math.comb(m, k) * Fraction(t) ** (m - k)
        out.append(acc)
    return Series(tuple(out), True)


def derivative(f: Series) -> Series:
    if f.ord == 0:
        if not f.poly:
            raise SeriesError("insufficient truncation order to differentiate")
        return Series((ZERO,), True)
    return Series(tuple(k * f.coeffs[k] for k in range(1, f.ord + 1)), f.poly)


def evaluate_poly(f: Series, t):
    if not f.poly:
        raise SeriesError("only polynomial series can be evaluated")
    acc = ZERO
    for c in reversed(f.coeffs):
        acc = acc * t + c
    return acc


# builders


def polynomial(coeffs: Iterable) -> Series:
    c = list(coeffs) or [ZERO]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return Series(tuple(c), True)


def constant(c, ord: int = 0) -> Series:
    return Series((c,) + (ZERO,) * ord)


def x_series(ord: int) -> Series:
    return Series(((ZERO, ONE) + (ZERO,) * ord)[: ord + 1])


def one_plus_x(ord: int) -> Series:
    return Series(((ONE, ONE) + (ZERO,) * ord)[: ord + 1])


def exp_x(ord: int) -> Series:
    return Series(tuple(Fraction(1, math.factorial(k)) for k in range(ord + 1)))


def exp_m1_over_x(ord: int) -> Series:
    """``(e^x - 1)/x``, coefficients ``1/(k+1)!``."""
    return Series(tuple(Fraction(1, math.factorial(k + 1)) for k in range(ord + 1)))


def log1p_over_x(ord: int) -> Series:
    """``log(1+x)/x``, coefficients ``(-1)^k/(k+1)``."""
    return Series(tuple(Fraction((-1) ** k, k + 1) for k in range(ord + 1)))


def catalan_gf(ord: int) -> Series:
    """``C(x)`` with ``C = 1 + x C^2``, via ``C_{m+1} = sum C_k C_{m-k}``."""
    c = [1]
    for m in range(ord):
        c.append(sum(c[k] * c[m - k] for k in range(m + 1)))
    return Series(tuple(c[: ord + 1]))


def exponent_set(exponents: Iterable[int], ord: int) -> Series:
    """Sum of ``x**s`` over the members ``s <= ord`` of an increasing set.

    The set must begin ``0, 1`` and increase strictly. Members past ``ord``
    are ignored, so an infinite generator may be passed as long as it is
    increasing.
    """
    members: list[int] = []
    for s in exponents:
        if members and s <= members[-1]:
            raise SeriesError("exponent set must be strictly increasing")
        if s > ord and len(members) >= 2:
            break
        members.append(s)
    if members[:2] != [0, 1]:
        raise SeriesError("exponent set must start 0, 1")
    c = [ZERO] * (ord + 1)
    for s in members:
        if s <= ord:
            c[s] = ONE
    return Series(tuple(c))


def power_exponents(k: int, ord: int) -> list[int]:
    """``0, 1, 2**k, 3**k, ...`` up to ``ord`` (always at least ``0, 1``)."""
    if k < 1:
        raise SeriesError("power exponent must be positive")
    out = [0, 1]
    m = 2
    while m**k <= ord:
        out.append(m**k)
        m += 1
    return out


BUILDERS = {
    "one_plus_x": one_plus_x,
    "exp_m1_over_x": exp_m1_over_x,
    "log1p_over_x": log1p_over_x,
    "catalan_gf": catalan_gf,
}


def series_builders(name: str, ord: int, arg: Sequence | None = None) -> Series:
    if name == "exponent_set":
        if arg is None:
            raise SeriesError("exponent_set needs a set of exponents")
        return exponent_set(arg, ord)
    if name == "polynomial":
        if arg is None:
            raise SeriesError("polynomial needs coefficients")
        return polynomial(arg)
    try:
        return BUILDERS[name](ord)
    except KeyError:
        raise SeriesError(f"unknown series builder {name!r}") from None


def _term(c, k: int) -> tuple[bool, str]:
    mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
    if isinstance(c, PolyZ) and len(c.coeffs) > 1:
        body = f"({render_value(c)})"
        return False, f"{body}*{mono}" if mono else body
    c = Fraction(c.constant_value() if isinstance(c, PolyZ) else c)
    neg, mag = c < 0, abs(c)
    if not mono:
        return neg, render_value(mag)
    if mag == 1:
        return neg, mono
    return neg, f"{render_value(mag)}*{mono}"


def render_series(f: Series) -> str:
    """E.g. ``1 - 1/2*x + 1/3*x^2 + O(x^3)``; polynomials omit the O-term."""
    parts: list[str] = []
    for k, c in enumerate(f.coeffs):
        if c == 0:
            continue
        neg, body = _term(c, k)
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    body = " ".join(parts) if parts else "0"
    if f.poly:
        return body
    return f"{body} + O(x^{f.ord + 1})"
