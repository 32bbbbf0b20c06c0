"""Command line: ``powdet verify | table | bench``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .arith import PolyZ, parse_rat
from .expr import ExprEvalError, ExprSyntaxError, parse_series
from .identities import VERIFIERS
from .matrix import coeff_matrix, render_text
from .series import SeriesError, exponent_set
from .suite import (
    ConfigError,
    RunConfig,
    expset_exponents,
    format_report_line,
    run_bench,
    run_suite,
    suite_json,
)

FORMAT_ENV = "POWDET_FORMAT"


def _rat_list(text: str) -> list[Fraction]:
    return [parse_rat(p) for p in text.split(",") if p.strip()]


def _int_list(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p.strip()]


def _n_values(text: str) -> list[int]:
    """``4``, ``2:5`` (inclusive) or ``1,3,6``."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return _int_list(text)


def _arg(fn):
    def parse(text: str):
        try:
            return fn(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    parse.__name__ = fn.__name__.lstrip("_")
    return parse


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default=os.environ.get(FORMAT_ENV, "text"),
                   help=f"output format (default from ${FORMAT_ENV}, else text)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="powdet",
        description="Exact verification of determinant identities for powers of formal power series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run identity verifiers and report pass/fail")
    v.add_argument("--identity", action="append", default=None,
                   help=f"identity id or 'all' (repeatable, comma-separated); one of: {', '.join(VERIFIERS)}")
    v.add_argument("--series", help='series expression, e.g. "(exp(x)-1)/x"')
    v.add_argument("--series2", help="second series for the additive identity")
    v.add_argument("--expset", help="exponent set: squares, cubes, powers:k or 0,1,3,...")
    v.add_argument("--n", type=_arg(_n_values), help="order: 4, 2:5 or 1,3,6")
    v.add_argument("--z", help="comma-separated rational z values")
    v.add_argument("--xs", type=_arg(_rat_list), help="comma-separated rational nodes")
    v.add_argument("--weights", type=_arg(_rat_list), help="weights c(r) for the weighted identity")
    v.add_argument("--ms", type=_arg(_int_list), help="distinct integer exponents (use --ms=-1,2 for negatives)")
    v.add_argument("--t", type=_arg(parse_rat), help="rational evaluation point")
    v.add_argument("--cases", type=int, default=3, help="seeded random cases per identity (default 3)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--oracle", dest="oracle", action="store_true", default=True,
                   help="cross-check determinants by cofactor expansion (default)")
    v.add_argument("--no-oracle", dest="oracle", action="store_false")
    v.add_argument("--jobs", type=int, default=1, help="worker processes")
    v.add_argument("--timings", action="store_true", help="include wall times in JSON output")
    _common(v)

    t = sub.add_parser("table", help="print the coefficient matrix [x^j] f^(z i)")
    t.add_argument("--series")
    t.add_argument("--expset")
    t.add_argument("--n", type=int, default=7)
    t.add_argument("--z", default="1", help="rational z, or 'z' for the symbolic matrix")
    _common(t)

    b = sub.add_parser("bench", help="time Bareiss against the triangularizing product")
    b.add_argument("--n", type=int, default=8, help="largest order")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--series", help="series with unit constant term (default: random)")
    b.add_argument("--domain", choices=("rat", "polyz"), default="rat")
    _common(b)
    return parser


def _identities(values: list[str] | None) -> list[str]:
    if not values:
        return ["all"]
    return [p.strip() for v in values for p in v.split(",") if p.strip()]


def cmd_verify(args) -> int:
    cfg = RunConfig(
        identities=_identities(args.identity),
        n=args.n,
        z=[p.strip() for p in args.z.split(",")] if args.z else None,
        series=args.series,
        series2=args.series2,
        expset=args.expset,
        xs=args.xs,
        weights=args.weights,
        ms=args.ms,
        t=args.t,
        cases=args.cases,
        seed=args.seed,
        oracle=args.oracle,
        format=args.format,
        jobs=args.jobs,
        timings=args.timings,
    )
    try:
        cfg.validate()
        reports, elapsed = run_suite(cfg)
    except (ConfigError, ExprSyntaxError, ExprEvalError, SeriesError, ValueError) as exc:
        print(f"powdet: error: {exc}", file=sys.stderr)
        return 2
    failed = sum(not r.passed for r in reports)
    if cfg.format == "json":
        print(json.dumps(suite_json(cfg, reports, elapsed), indent=2))
    else:
        for r in reports:
            print(format_report_line(r))
        print(f"\n{len(reports)} cases, {len(reports) - failed} passed, {failed} failed ({elapsed:.0f} ms)")
    return min(failed, 100)


def _table_series(args, n: int):
    if args.series is not None:
        return parse_series(args.series, n)
    members, _ = expset_exponents(args.expset or "squares", n)
    return exponent_set(members, n)


def cmd_table(args) -> int:
    try:
        f = _table_series(args, args.n)
        z = PolyZ.z() if args.z.strip() == "z" else parse_rat(args.z)
        m = coeff_matrix(f, args.n, z)
    except (ConfigError, ExprSyntaxError, ExprEvalError, SeriesError, ValueError) as exc:
        print(f"powdet: error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps(m.to_json()))
    else:
        print(render_text(m))
    return 0


def cmd_bench(args) -> int:
    try:
        f = parse_series(args.series, args.n) if args.series else None
        rows = run_bench(args.n, args.seed, symbolic=args.domain == "polyz", f=f)
    except (ExprSyntaxError, ExprEvalError, SeriesError, ValueError) as exc:
        print(f"powdet: error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps([r.to_dict() for r in rows], indent=2))
    else:
        head = f"{'n':>3}  {'bareiss ms':>11}  {'b*c ms':>9}  {'bits':>6}  agree  det"
        print(head)
        for r in rows:
            det = r.det if len(r.det) <= 40 else r.det[:37] + "..."
            extra = f"  (degree {r.det_degree})" if r.det_degree is not None else ""
            print(f"{r.n:>3}  {r.bareiss_ms:>11.3f}  {r.shortcut_ms:>9.3f}  {r.max_bits:>6}  {str(r.agree):>5}  {det}{extra}")
    return 0 if all(r.agree for r in rows) else 1


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"verify": cmd_verify, "table": cmd_table, "bench": cmd_bench}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
