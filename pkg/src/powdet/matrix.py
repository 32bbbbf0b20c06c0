"""Exact dense matrices, determinants, and the structured matrices built from
powers of a series.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .arith import PolyZ, canonical, render_value
from .series import (
    Series,
    SeriesError,
    series_coeff,
    series_pow,
    series_pow_int,
    series_pow_scalar,
    series_scale,
    taylor_shift,
)

ORACLE_CAP = 7


class MatrixError(ValueError):
    pass


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise MatrixError("entries length does not match dimensions")
        object.__setattr__(self, "entries", tuple(canonical(e) for e in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise MatrixError("ragged rows")
        return cls(len(rows), ncols, tuple(e for r in rows for e in r))

    @classmethod
    def build(cls, rows: int, cols: int, fn: Callable[[int, int], object]) -> "ExactMatrix":
        return cls(rows, cols, tuple(fn(i, j) for i in range(rows) for j in range(cols)))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls.build(n, n, lambda i, j: 1 if i == j else 0)

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def leading_minor(self, k: int) -> "ExactMatrix":
        return ExactMatrix.build(k, k, lambda i, j: self[i, j])

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix.build(self.cols, self.rows, lambda i, j: self[j, i])

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        return mat_ops(self, other, "add")

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return mat_ops(self, other, "mul")

    def render_text(self) -> str:
        return render_text(self)

    def to_json(self) -> list[list[str]]:
        return [[render_value(e) for e in self.row(i)] for i in range(self.rows)]


def mat_ops(a: ExactMatrix, b: ExactMatrix, op: str) -> ExactMatrix:
    if op == "add":
        if (a.rows, a.cols) != (b.rows, b.cols):
            raise MatrixError(f"dimension mismatch: {a.rows}x{a.cols} + {b.rows}x{b.cols}")
        return ExactMatrix(a.rows, a.cols, tuple(x + y for x, y in zip(a.entries, b.entries)))
    if op == "mul":
        if a.cols != b.rows:
            raise MatrixError(f"dimension mismatch: {a.rows}x{a.cols} * {b.rows}x{b.cols}")

        def entry(i, j):
            acc = Fraction(0)
            for k in range(a.cols):
                x = a[i, k]
                if x != 0:
                    acc = acc + x * b[k, j]
            return acc

        return ExactMatrix.build(a.rows, b.cols, entry)
    raise ValueError(f"unknown matrix operation {op!r}")


def _div_exact(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        assert r == 0, "Bareiss division must be exact"
        return q
    return a / b


def det_bareiss(m: ExactMatrix):
    """Fraction-free (Bareiss) elimination; exact over Int, Rat and PolyZ."""
    if not m.is_square:
        raise MatrixError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    a = [list(r) for r in m.to_rows()]
    # integer matrices stay in int so every step is a true exact division
    integral = all(isinstance(e, Fraction) and e.denominator == 1 for e in m.entries)
    if integral:
        a = [[int(e) for e in r] for r in a]
    elif any(isinstance(e, PolyZ) for e in m.entries):
        a = [[e if isinstance(e, PolyZ) else PolyZ.const(e) for e in r] for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return _zero_like(a[k][k])
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = _div_exact(a[i][j] * pivot - aik * a[k][j], prev)
            a[i][k] = 0
        prev = pivot
    d = a[n - 1][n - 1]
    if sign < 0:
        d = -d
    return Fraction(d) if integral else canonical(d)


def _zero_like(v):
    if isinstance(v, PolyZ):
        return PolyZ()
    return Fraction(0)


def det_cofactor(m: ExactMatrix, cap: int = ORACLE_CAP):
    """Laplace expansion along the first row. Test oracle only."""
    if not m.is_square:
        raise MatrixError("determinant of a non-square matrix")
    if m.rows > cap:
        raise MatrixError(f"oracle cap exceeded: dimension {m.rows} > {cap}")
    return _laplace(m.to_rows())


def _laplace(rows: list[list]):
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    for j, a in enumerate(rows[0]):
        if a == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * _laplace(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def is_upper_triangular_with_diag(m: ExactMatrix, diag: Sequence) -> bool:
    if not m.is_square:
        raise MatrixError("triangularity check needs a square matrix")
    n = m.rows
    if len(diag) != n:
        return False
    for i in range(n):
        if m[i, i] != diag[i]:
            return False
        for j in range(i):
            if m[i, j] != 0:
                return False
    return True


def coeff_matrix(f: Series, n: int, z=1) -> ExactMatrix:
    """``(n+1) x (n+1)`` matrix with entry ``(i, j) = [x^j] f^(z*i)``."""
    if f.ord < n and not f.poly:
        raise SeriesError(f"insufficient truncation order: need x^{n}, have order {f.ord}")
    g = f.truncated(n)
    rows = []
    for i in range(n + 1):
        p = series_pow(g, z * i)
        rows.append([series_coeff(p, j) for j in range(n + 1)])
    return ExactMatrix.from_rows(rows)


def binomial_sign_matrix(n: int) -> ExactMatrix:
    """Entry ``(i, j) = (-1)^(i+j) C(i, j)``; lower unitriangular."""
    return ExactMatrix.build(n + 1, n + 1, lambda i, j: (-1) ** (i + j) * math.comb(i, j))


def vandermonde_matrix(xs: Sequence) -> ExactMatrix:
    """Entry ``(k, i) = xs[i]**k``: row ``k`` holds the ``k``-th powers."""
    n = len(xs)
    return ExactMatrix.build(n, n, lambda k, i: Fraction(xs[i]) ** k)


def vandermonde_product(xs: Sequence) -> Fraction:
    """``prod_{i<j} (x_j - x_i)``; 1 for fewer than two nodes."""
    acc = Fraction(1)
    for j in range(len(xs)):
        for i in range(j):
            acc *= Fraction(xs[j]) - Fraction(xs[i])
    return acc


def mina_matrix_origin(f: Series, z, xs: Sequence, n: int) -> ExactMatrix:
    """Entry ``(i, j) = D^j (f^(z*x_i))`` at ``x = 0``, i.e. ``j! [x^j] f^(z x_i)``."""
    if len(xs) != n + 1:
        raise MatrixError(f"need {n + 1} nodes, got {len(xs)}")
    if f.ord < n and not f.poly:
        raise SeriesError(f"insufficient truncation order: need x^{n}, have order {f.ord}")
    g = f.truncated(n)
    rows = []
    for x in xs:
        p = series_pow(g, z * Fraction(x))
        rows.append([math.factorial(j) * series_coeff(p, j) for j in range(n + 1)])
    return ExactMatrix.from_rows(rows)


def mina_matrix_at_point(f: Series, ms: Sequence[int], t, n: int) -> ExactMatrix:
    """Entry ``(i, j)`` = ``j``-th derivative of ``f^ms[i]`` at ``t``.

    Nonnegative exponents expand the polynomial power directly. A negative
    exponent needs ``f(t) != 0``; then ``f(t+u)^m = f(t)^m (g(u)/f(t))^m``
    with ``g`` the Taylor shift, and the derivatives are ``j! [u^j]``.
    """
    if not f.poly:
        raise SeriesError("mina_matrix_at_point needs a polynomial series")
    if len(ms) != n + 1:
        raise MatrixError(f"need {n + 1} exponents, got {len(ms)}")
    t = Fraction(t)
    rows = []
    for m in ms:
        if m != int(m):
            raise MatrixError("exponents must be integers")
        m = int(m)
        if m < 0:
            rows.append(_negative_power_derivatives(f, m, t, n))
            continue
        p = series_pow_int(f, m).coeffs
        row = []
        for j in range(n + 1):
            # j-th derivative: sum_k k!/(k-j)! p_k t^(k-j)
            acc = Fraction(0)
            for k in range(j, len(p)):
                if p[k] != 0:
                    acc += p[k] * math.perm(k, j) * t ** (k - j)
            row.append(acc)
        rows.append(row)
    return ExactMatrix.from_rows(rows)


def _negative_power_derivatives(f: Series, m: int, t: Fraction, n: int) -> list[Fraction]:
    g = taylor_shift(f, t)
    c = g.coeffs[0]
    if c == 0:
        raise SeriesError("evaluation point is a zero of f")
    p = series_pow_scalar(series_scale(g.truncated(n), 1 / c), m)
    scale = c**m
    return [scale * math.factorial(j) * p[j] for j in range(n + 1)]


def render_text(m: ExactMatrix) -> str:
    """Right-aligned columns separated by two spaces, one row per line."""
    cells = [[render_value(e) for e in m.row(i)] for i in range(m.rows)]
    widths = [max((len(r[j]) for r in cells), default=0) for j in range(m.cols)]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells)


def render_json(m: ExactMatrix) -> str:
    return json.dumps(m.to_json())

