"""Recursive-descent parser for series expressions such as ``(exp(x)-1)/x``.

Grammar::

    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := "-" unary | power
    power    := atom ["^" exponent]
    exponent := ["-"] INT | "(" ["-"] INT ["/" INT] ")"
    atom     := INT | "x" | "(" expr ")"
              | ("exp" | "log" | "sqrt") "(" expr ")"
              | "catalan" ["(" ")"]
              | "sumpow" "(" INT ")"
              | "expset" "(" INT ("," INT)* ")"

``sumpow(k)`` is the series whose exponents are the k-th powers
``0, 1, 2^k, ...``; ``expset(0,1,3,...)`` lists the exponents directly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from . import series as S
from .arith import PolyZ, as_nonneg_int, render_rat
from .series import Series, SeriesError

Span = tuple[int, int]


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class ExprEvalError(ValueError):
    def __init__(self, message: str, span: Span):
        super().__init__(f"{message} (in expression span {span[0]}:{span[1]})")
        self.span = span


@dataclass(frozen=True)
class Num:
    value: Fraction
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: Fraction
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Node"
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Builder:
    name: str
    args: tuple[int, ...] = ()
    span: Span = field(default=(0, 0), compare=False, repr=False)


Node = Union[Num, Var, BinOp, Neg, Pow, Call, Builder]

FUNCTIONS = ("exp", "log", "sqrt")
BUILDERS = ("catalan", "sumpow", "expset")

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")


@dataclass
class _Tok:
    kind: str  # "int", "name", "op", "end"
    text: str
    pos: int


def tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    while src[pos:].strip():
        m = _TOKEN.match(src, pos)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(_Tok("int", m.group(1), start))
        elif m.group(2):
            toks.append(_Tok("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^(),":
                raise ExprSyntaxError(f"unexpected character {ch!r}", start)
            toks.append(_Tok("op", ch, start))
        pos = m.end()
    toks.append(_Tok("end", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            raise ExprSyntaxError(f"expected {text!r}, found {self._found()}", self.tok.pos)
        return self.advance()

    def expect_int(self) -> int:
        if self.tok.kind != "int":
            raise ExprSyntaxError(f"expected integer, found {self._found()}", self.tok.pos)
        return int(self.advance().text)

    def _found(self) -> str:
        return "end of input" if self.tok.kind == "end" else repr(self.tok.text)

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(
                f"expected operator or end of input, found {self._found()}", self.tok.pos
            )
        return node

    def expr(self) -> Node:
        left = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            right = self.term()
            left = BinOp(op, left, right, (left.span[0], right.span[1]))
        return left

    def term(self) -> Node:
        left = self.unary()
        while self.at("*") or self.at("/"):
            op = self.advance().text
            right = self.unary()
            left = BinOp(op, left, right, (left.span[0], right.span[1]))
        return left

    def unary(self) -> Node:
        if self.at("-"):
            start = self.advance().pos
            operand = self.unary()
            return Neg(operand, (start, operand.span[1]))
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if not self.at("^"):
            return base
        self.advance()
        exponent, end = self.exponent()
        return Pow(base, exponent, (base.span[0], end))

    def exponent(self) -> tuple[Fraction, int]:
        paren = self.at("(")
        if paren:
            self.advance()
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        num = self.expect_int()
        den = 1
        if paren and self.at("/"):
            self.advance()
            den = self.expect_int()
            if den == 0:
                raise ExprSyntaxError("zero denominator in exponent", self.toks[self.i - 1].pos)
        end = self.toks[self.i - 1].pos + len(self.toks[self.i - 1].text)
        if paren:
            end = self.expect(")").pos + 1
        return Fraction(sign * num, den), end

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Num(Fraction(int(t.text)), (t.pos, t.pos + len(t.text)))
        if self.at("("):
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if t.kind == "name":
            self.advance()
            name = t.text
            if name == "x":
                return Var((t.pos, t.pos + 1))
            if name in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                end = self.expect(")").pos + 1
                return Call(name, arg, (t.pos, end))
            if name in BUILDERS:
                return self.builder(name, t.pos)
            raise ExprSyntaxError(f"unknown identifier {name!r}", t.pos)
        raise ExprSyntaxError(f"expected operand, found {self._found()}", t.pos)

    def builder(self, name: str, start: int) -> Builder:
        if name == "catalan":
            end = start + len(name)
            if self.at("("):
                self.advance()
                end = self.expect(")").pos + 1
            return Builder(name, (), (start, end))
        self.expect("(")
        args = [self.expect_int()]
        while name == "expset" and self.at(","):
            self.advance()
            args.append(self.expect_int())
        end = self.expect(")").pos + 1
        return Builder(name, tuple(args), (start, end))


def parse(src: str) -> Node:
    return _Parser(src).parse()


def render(node: Node) -> str:
    """Fully parenthesized text that parses back to an equal tree."""
    if isinstance(node, Num):
        return render_rat(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, BinOp):
        return f"({render(node.left)} {node.op} {render(node.right)})"
    if isinstance(node, Neg):
        return f"(-{render(node.operand)})"
    if isinstance(node, Pow):
        e = node.exponent
        exp = str(e.numerator) if e.denominator == 1 and e >= 0 else f"({render_rat(e)})"
        return f"({render(node.base)})^{exp}"
    if isinstance(node, Call):
        return f"{node.name}({render(node.arg)})"
    if isinstance(node, Builder):
        return f"{node.name}({','.join(map(str, node.args))})"
    raise TypeError(f"not an expression node: {node!r}")


# evaluation


def eval_ast(ast: Node, ord: int) -> Series:
    """Evaluate to a truncated series known exactly through ``x**ord``.

    Divisions by ``x**k`` cost ``k`` orders, so the tree is evaluated at a
    working order raised until the result reaches ``ord``.
    """
    work = ord
    for _ in range(64):
        result = _eval(ast, work)
        if result.poly or result.ord >= ord:
            return result.truncated(ord)
        work += ord - result.ord
    raise ExprEvalError("could not reach the requested truncation order", ast.span)


def eval_polynomial(ast: Node) -> Series:
    """Evaluate an expression that must denote a polynomial in ``x``."""
    result = _eval(ast, 0, polynomial_only=True)
    if not result.poly:
        raise ExprEvalError("expression is not a polynomial", ast.span)
    return result


def parse_series(src: str, ord: int) -> Series:
    return eval_ast(parse(src), ord)


def parse_polynomial(src: str) -> Series:
    return eval_polynomial(parse(src))


def _cap(s: Series, work: int) -> Series:
    # keep polynomials exact but stop them growing past the working order
    if s.poly and s.ord > work:
        return s.truncated(work)
    return s


def _eval(node: Node, work: int, polynomial_only: bool = False) -> Series:
    try:
        return _eval_node(node, work, polynomial_only)
    except SeriesError as exc:
        raise ExprEvalError(str(exc), node.span) from exc


def _eval_node(node: Node, work: int, polynomial_only: bool) -> Series:
    def sub(n: Node) -> Series:
        return _eval(n, work, polynomial_only)

    def cap(s: Series) -> Series:
        return s if polynomial_only else _cap(s, work)

    def not_poly():
        raise ExprEvalError("expression is not a polynomial", node.span)

    if isinstance(node, Num):
        return S.polynomial((node.value,))
    if isinstance(node, Var):
        return S.polynomial((0, 1))
    if isinstance(node, Neg):
        return -sub(node.operand)
    if isinstance(node, BinOp):
        left, right = sub(node.left), sub(node.right)
        if node.op == "+":
            return cap(left + right)
        if node.op == "-":
            return cap(left - right)
        if node.op == "*":
            return cap(left * right)
        return _divide(left, right, work, node, polynomial_only)
    if isinstance(node, Pow):
        base = sub(node.base)
        m = as_nonneg_int(node.exponent)
        if m is not None:
            if base.poly and not polynomial_only and base.ord * m > work:
                base = base.truncated(work)
            return cap(S.series_pow_int(base, m))
        if polynomial_only:
            not_poly()
        if base.poly:
            base = base.truncated(work)
        return S.series_pow_scalar(base, node.exponent)
    if polynomial_only:
        not_poly()
    if isinstance(node, Call):
        arg = sub(node.arg)
        if arg.poly:
            arg = arg.truncated(work)
        if node.name == "exp":
            return S.series_exp(arg)
        if node.name == "log":
            return S.series_log(arg)
        return S.series_pow_scalar(arg, Fraction(1, 2))
    if isinstance(node, Builder):
        if node.name == "catalan":
            return S.catalan_gf(work)
        if node.name == "sumpow":
            return S.exponent_set(S.power_exponents(node.args[0], work), work)
        return S.exponent_set(node.args, work)
    raise TypeError(f"not an expression node: {node!r}")


def _divide(num: Series, den: Series, work: int, node: Node, polynomial_only: bool) -> Series:
    k = S.lowest_term(den)
    if k is None:
        raise ExprEvalError("division by a zero series", node.span)
    if k > 0:
        num = S.series_div_x_pow(num, k)
        den = S.series_div_x_pow(den, k)
    c = den.coeffs[0]
    if isinstance(c, PolyZ):
        c = c.constant_value()
    unit = S.series_scale(den, 1 / c)
    if unit.poly and unit.ord == 0:
        return S.series_scale(num, 1 / c)
    if polynomial_only:
        raise ExprEvalError("expression is not a polynomial", node.span)
    if unit.poly:
        unit = unit.truncated(work)
    if num.poly:
        num = num.truncated(unit.ord)
    inv = S.series_pow_scalar(unit, -1)
    return S.series_scale(S.series_mul(num, inv), 1 / c)
