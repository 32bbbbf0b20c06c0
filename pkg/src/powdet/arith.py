"""Exact scalar domains: integers, rationals, and univariate polynomials.

Python ``int`` and ``fractions.Fraction`` serve as the integer and rational
domains. ``PolyZ`` is a dense univariate polynomial with rational
coefficients, used both for the symbolic exponent ``z`` and for plain
polynomials in ``x`` where an identity needs one.

Every higher module only relies on ``+``, ``-``, ``*``, ``==`` and exact
division by a nonzero rational, which all three domains support.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

Scalar = Union[int, Fraction]

NEG_INF = -math.inf

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def rat_make(num: int, den: int = 1) -> Fraction:
    """Return ``num/den`` in lowest terms with a positive denominator."""
    if den == 0:
        raise ZeroDivisionError("division by zero")
    return Fraction(num, den)


def parse_rat(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``. Decimal notation is rejected."""
    m = _RAT_RE.match(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    return rat_make(num, den)


def render_rat(q: Scalar) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, Rational):
        return Fraction(c)
    raise TypeError(f"expected a rational scalar, got {type(c).__name__}")


class PolyZ:
    """Univariate polynomial over the rationals, stored in canonical form.

    ``coeffs[k]`` is the coefficient of ``z**k``; trailing zeros are never
    stored, so the zero polynomial has an empty coefficient tuple and
    degree ``-inf``.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_as_fraction(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def z(cls) -> "PolyZ":
        return cls((0, 1))

    @classmethod
    def const(cls, c: Scalar) -> "PolyZ":
        return cls((c,))

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int | float:
        return len(self._c) - 1 if self._c else NEG_INF

    @property
    def leading(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self._c[k] if 0 <= k < len(self._c) else Fraction(0)

    def is_constant(self) -> bool:
        return len(self._c) <= 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.coeff(0)

    # ring operations

    @staticmethod
    def _lift(other) -> "PolyZ | None":
        if isinstance(other, PolyZ):
            return other
        if isinstance(other, Rational):
            return PolyZ((other,))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self._c, o._c
        if len(a) < len(b):
            a, b = b, a
        return PolyZ([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "PolyZ":
        return PolyZ(-a for a in self._c)

    def __pos__(self) -> "PolyZ":
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, Rational):
            if other == 0:
                return PolyZ()
            return PolyZ(a * other for a in self._c)
        if not isinstance(other, PolyZ):
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return PolyZ()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return PolyZ(out)

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "PolyZ":
        if not isinstance(m, int) or m < 0:
            raise ValueError("PolyZ powers must be nonnegative integers")
        result, base = PolyZ((1,)), self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return poly_scalar_div(self, other)
        if isinstance(other, PolyZ):
            if other.is_constant():
                return poly_scalar_div(self, other.coeff(0))
            return self.exact_div(other)
        return NotImplemented

    def exact_div(self, d: "PolyZ") -> "PolyZ":
        """Quotient ``self / d``; raises ``ArithmeticError`` unless exact.

        Only used where exactness is guaranteed by construction (the
        interior divisions of fraction-free elimination).
        """
        if not d._c:
            raise ZeroDivisionError("division by zero")
        rem = list(self._c)
        dd = len(d._c) - 1
        lead = d._c[-1]
        if len(rem) - 1 < dd:
            if rem:
                raise ArithmeticError("polynomial division is not exact")
            return PolyZ()
        q = [Fraction(0)] * (len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k] / lead
            q[k - dd] = c
            if c:
                for i, b in enumerate(d._c):
                    rem[k - dd + i] -= c * b
        if any(rem[:dd]):
            raise ArithmeticError("polynomial division is not exact")
        return PolyZ(q)

    def __call__(self, v: Scalar) -> Fraction:
        return poly_eval(self, v)

    # comparison and hashing

    def __eq__(self, other):
        if isinstance(other, PolyZ):
            return self._c == other._c
        if isinstance(other, Rational):
            return self._c == PolyZ((other,))._c
        return NotImplemented

    def __hash__(self):
        if len(self._c) <= 1:
            return hash(self.coeff(0))
        return hash(("PolyZ", self._c))

    def __bool__(self):
        return bool(self._c)

    def __repr__(self):
        return f"PolyZ({render_poly(self)!r})"

    def __str__(self):
        return render_poly(self)


def poly_arith(a: PolyZ, b: PolyZ, op: str) -> PolyZ:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_eval(p: PolyZ | Scalar, v: Scalar) -> Fraction:
    # determinants over PolyZ may come back as plain constants
    if not isinstance(p, PolyZ):
        return Fraction(p)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * v + c
    return acc


def poly_scalar_div(p: PolyZ, d: Scalar) -> PolyZ:
    if d == 0:
        raise ZeroDivisionError("division by zero")
    d = _as_fraction(d)
    return PolyZ(c / d for c in p.coeffs)


def _monomial(var: str, k: int) -> str:
    if k == 0:
        return ""
    return var if k == 1 else f"{var}^{k}"


def render_poly(p: PolyZ, var: str = "z") -> str:
    """Render in descending degree, e.g. ``z^2 - 1`` or ``1/3*z``."""
    if not p.coeffs:
        return "0"
    parts: list[str] = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        neg = c < 0
        mag = -c if neg else c
        mono = _monomial(var, k)
        if not mono:
            body = render_rat(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{render_rat(mag)}*{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def render_value(v) -> str:
    """Canonical text for any coefficient-domain value."""
    if isinstance(v, PolyZ):
        return render_poly(v)
    if isinstance(v, Rational):
        return render_rat(v)
    raise TypeError(f"cannot render {type(v).__name__}")


def canonical(v):
    """Normalize ints to ``Fraction``; leave ``Fraction``/``PolyZ`` alone."""
    if isinstance(v, (Fraction, PolyZ)):
        return v
    if isinstance(v, Rational):
        return Fraction(v)
    raise TypeError(f"not a coefficient-domain value: {type(v).__name__}")


def as_nonneg_int(v) -> int | None:
    """Return ``v`` as an ``int`` if it is a nonnegative integer, else None."""
    if isinstance(v, PolyZ):
        if not v.is_constant():
            return None
        v = v.coeff(0)
    v = Fraction(v)
    if v.denominator == 1 and v >= 0:
        return v.numerator
    return None


def bit_length(v) -> int:
    """Largest numerator/denominator bit length inside ``v``."""
    if isinstance(v, PolyZ):
        return max((bit_length(c) for c in v.coeffs), default=0)
    v = Fraction(v)
    return max(abs(v.numerator).bit_length(), v.denominator.bit_length())

