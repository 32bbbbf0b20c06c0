"""Case generation, suite execution and report assembly.

A run is a list of numbered ``Case`` objects. Each identity contributes one
case built from the user's parameters (or a canonical default) plus a
number of seeded random cases. Cases are independent, so they may run in a
process pool; results are always emitted in case order.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .arith import PolyZ, bit_length, parse_rat, render_rat, render_value
from .expr import parse_polynomial, parse_series
from .identities import VERIFIERS, PolyFamily, Report, render_param
from .matrix import binomial_sign_matrix, coeff_matrix, det_bareiss
from .series import Series, exponent_set, polynomial, power_exponents

# explicit cases fall back to these when a flag is absent
DEFAULT_N = {
    "theorem1": 7,
    "theorem2": 3,
    "binomial": 5,
    "triangularization": 3,
    "representations": 7,
    "stirling2": 4,
    "stirling1": 4,
    "catalan": 3,
    "additive": 2,
    "weighted": 2,
    "moments": 4,
    "degree-claim": 6,
}

# upper bounds on n for random cases
RANDOM_NMAX = {
    "theorem1": 8,
    "theorem2": 5,
    "binomial": 5,
    "triangularization": 6,
    "representations": 7,
    "stirling2": 6,
    "stirling1": 6,
    "catalan": 5,
    "additive": 6,
    "weighted": 5,
    "moments": 5,
    "mina-origin": 5,
    "mina-point": 4,
    "lemma1": 5,
    "degree-claim": 6,
}

NAMED_EXPSETS = {"squares": 2, "cubes": 3}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    identities: list[str] = field(default_factory=lambda: ["all"])
    n: list[int] | None = None
    z: list[str] | None = None
    series: str | None = None
    series2: str | None = None
    expset: str | None = None
    xs: list[Fraction] | None = None
    weights: list[Fraction] | None = None
    ms: list[int] | None = None
    t: Fraction | None = None
    cases: int = 3
    seed: int = 0
    oracle: bool = True
    format: str = "text"
    jobs: int = 1
    timings: bool = False

    def selected(self) -> list[str]:
        if "all" in self.identities:
            return list(VERIFIERS)
        return list(self.identities)

    def validate(self) -> None:
        for ident in self.identities:
            if ident != "all" and ident not in VERIFIERS:
                raise ConfigError(f"unknown identity {ident!r}; choose from {', '.join(VERIFIERS)}")
        if self.n is not None and any(k < 0 for k in self.n):
            raise ConfigError("--n must be nonnegative")
        if self.cases < 0:
            raise ConfigError("--cases must be nonnegative")
        if self.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        if self.format not in ("text", "json"):
            raise ConfigError("--format must be text or json")
        if self.xs is not None and self.weights is not None and len(self.xs) != len(self.weights):
            raise ConfigError("--xs and --weights must have equal length")
        if self.ms is not None and len(set(self.ms)) != len(self.ms):
            raise ConfigError("--ms must be distinct integers")
        for zs in self.z or ():
            if zs != "z":
                parse_rat(zs)

    def to_json(self) -> dict:
        def rats(v):
            return None if v is None else [render_rat(q) for q in v]

        return {
            "identities": self.selected(),
            "n": self.n,
            "z": self.z,
            "series": self.series,
            "series2": self.series2,
            "expset": self.expset,
            "xs": rats(self.xs),
            "weights": rats(self.weights),
            "ms": self.ms,
            "t": None if self.t is None else render_rat(self.t),
            "cases": self.cases,
            "seed": self.seed,
            "oracle": self.oracle,
        }


@dataclass(frozen=True)
class Case:
    index: int
    identity: str
    kwargs: dict


def run_case(case: Case) -> Report:
    fn = VERIFIERS[case.identity]
    try:
        return fn(**case.kwargs)
    except (ValueError, ArithmeticError) as exc:
        params = {k: render_param(v) for k, v in case.kwargs.items() if k != "oracle"}
        return Report(case.identity, params, "error", "-", False, notes=[f"{type(exc).__name__}: {exc}"])


def run_cases(cases: Sequence[Case], jobs: int = 1) -> list[Report]:
    if jobs <= 1 or len(cases) <= 1:
        return [run_case(c) for c in cases]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_case, cases))


# random values


def rand_rat(rng: random.Random, nonzero: bool = False) -> Fraction:
    """Numerator in [-9, 9], denominator in [1, 9]."""
    while True:
        q = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        if q or not nonzero:
            return q


def rand_series(rng: random.Random, ord: int, a0=Fraction(1), a1_nonzero: bool = True) -> Series:
    coeffs = [Fraction(a0)]
    if ord >= 1:
        coeffs.append(rand_rat(rng, nonzero=a1_nonzero))
    coeffs += [rand_rat(rng) for _ in range(ord - 1)]
    return Series(tuple(coeffs))


def rand_poly(rng: random.Random, degree: int) -> list[Fraction]:
    return [rand_rat(rng) for _ in range(degree)] + [rand_rat(rng, nonzero=True)]


def rand_distinct_rats(rng: random.Random, count: int) -> list[Fraction]:
    out: list[Fraction] = []
    while len(out) < count:
        q = rand_rat(rng)
        if q not in out:
            out.append(q)
    return out


def rand_expset(rng: random.Random, top: int) -> list[int]:
    extra = [s for s in range(2, top + 1) if rng.random() < 0.4]
    return [0, 1] + extra


def random_case(identity: str, rng: random.Random, index: int, nmax: int | None = None) -> dict:
    """Keyword arguments for one random instance of ``identity``."""
    top = RANDOM_NMAX.get(identity, 5) if nmax is None else nmax
    lo = 1 if identity == "catalan" else 0
    n = rng.randint(lo, max(lo, top))
    if identity == "theorem1":
        variant = index % 3
        a0 = Fraction(1) if variant == 0 else Fraction(0) if variant == 2 else _nonunit(rng)
        return {"f": rand_series(rng, n, a0), "n": n}
    if identity == "theorem2":
        n = max(n, 1)
        return {"f": rand_series(rng, n), "n": n, "zs": [rand_rat(rng) for _ in range(5)]}
    if identity == "binomial":
        return {"n": n}
    if identity == "triangularization":
        return {"f": rand_series(rng, n), "n": n, "z": rand_rat(rng, nonzero=True)}
    if identity == "representations":
        s = rand_expset(rng, n)
        return {"exponents": s, "n": n}
    if identity in ("stirling2", "stirling1", "catalan"):
        return {"z": rng.randint(1, 3), "n": n}
    if identity == "catalan-coeff":
        return {"kmax": rng.randint(1, 10), "jmax": rng.randint(1, 10)}
    if identity == "additive":
        return {"f": rand_series(rng, n), "g": rand_series(rng, n), "n": n}
    if identity == "weighted":
        m = rng.randint(1, 4)
        return {"points": rand_distinct_rats(rng, m), "weights": [rand_rat(rng) for _ in range(m)], "n": n}
    if identity == "moments":
        return {"fp": polynomial(rand_poly(rng, rng.randint(0, 4))), "n": n}
    if identity == "mina-origin":
        return {"f": rand_series(rng, n), "z": rand_rat(rng, nonzero=True),
                "xs": rand_distinct_rats(rng, n + 1), "n": n}
    if identity == "mina-point":
        fp = polynomial(rand_poly(rng, rng.randint(1, 5)))
        ms = rng.sample(range(-4, 7), n + 1)
        t = rand_rat(rng)
        while _peval(fp, t) == 0:
            t = rand_rat(rng)
        return {"fp": fp, "ms": ms, "t": t, "n": n}
    if identity == "lemma1":
        polys = [PolyZ(rand_poly(rng, j)) for j in range(n + 1)]
        return {"ps": PolyFamily(tuple(polys)), "xs": [rand_rat(rng) for _ in range(n + 1)]}
    if identity == "degree-claim":
        return {"f": rand_series(rng, n), "n": n}
    raise ConfigError(f"no random generator for {identity!r}")


def _nonunit(rng: random.Random) -> Fraction:
    while True:
        q = rand_rat(rng, nonzero=True)
        if q != 1:
            return q


def _peval(fp: Series, t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(fp.coeffs):
        acc = acc * t + c
    return acc


# explicit cases from flags


def expset_exponents(text: str, top: int) -> tuple[list[int], str]:
    """Resolve ``squares``, ``cubes``, ``powers:k`` or ``0,1,3,...``."""
    text = text.strip()
    if text in NAMED_EXPSETS:
        return power_exponents(NAMED_EXPSETS[text], top), text
    if text.startswith("powers:"):
        return power_exponents(int(text.split(":", 1)[1]), top), text
    try:
        members = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"bad exponent set {text!r}") from None
    return members, "{" + ",".join(map(str, members)) + "}"


def _series_from(cfg: RunConfig, n: int, default: str) -> tuple[Series, str]:
    if cfg.expset is not None and cfg.series is None:
        members, label = expset_exponents(cfg.expset, n)
        return exponent_set(members, n), label
    src = cfg.series or default
    return parse_series(src, n), src


def _z_values(cfg: RunConfig, default: str) -> list[str]:
    return cfg.z or [default]


def explicit_cases(identity: str, cfg: RunConfig) -> Iterator[dict]:
    ns = cfg.n if cfg.n is not None else [DEFAULT_N.get(identity, 2)]
    common = {"oracle": cfg.oracle}
    if identity == "theorem1":
        for n in ns:
            if cfg.series is None and cfg.expset is None:
                f, label = exponent_set(power_exponents(2, n), n), "squares"
            else:
                f, label = _series_from(cfg, n, "")
            yield {"f": f, "n": n, "label": label, **common}
    elif identity == "degree-claim":
        for n in ns:
            f, label = _series_from(cfg, n, "1+x+x^2")
            yield {"f": f, "n": n, "label": label, **common}
    elif identity == "theorem2":
        zs = [parse_rat(v) for v in (cfg.z or ["1/2", "2", "-3"]) if v != "z"]
        for n in ns:
            f, label = _series_from(cfg, n, "1+x+x^2")
            yield {"f": f, "n": n, "zs": zs, "label": label, **common}
    elif identity == "binomial":
        for n in ns:
            yield {"n": n, **common}
    elif identity == "triangularization":
        for n in ns:
            f, label = _series_from(cfg, n, "1+2*x+7*x^2")
            for zv in _z_values(cfg, "1"):
                yield {"f": f, "n": n, "z": parse_rat(zv), "label": label, **common}
    elif identity == "representations":
        for n in ns:
            members, label = expset_exponents(cfg.expset or "squares", n)
            yield {"exponents": members, "n": n, "label": label, **common}
    elif identity in ("stirling2", "stirling1", "catalan"):
        for n in ns:
            for zv in _z_values(cfg, "2"):
                z = parse_rat(zv)
                if z.denominator != 1 or z < 1:
                    raise ConfigError(f"{identity} needs a positive integer z")
                yield {"z": int(z), "n": max(n, 1) if identity == "catalan" else n, **common}
    elif identity == "catalan-coeff":
        yield {"kmax": 10, "jmax": 10, **common}
    elif identity == "additive":
        for n in ns:
            f, lf = _series_from(cfg, n, "1+2*x+x^3")
            src2 = cfg.series2 or "1+3*x"
            yield {"f": f, "g": parse_series(src2, n), "n": n, "label": (lf, src2), **common}
    elif identity == "weighted":
        pts = cfg.xs or [Fraction(1, 2), Fraction(1, 3)]
        ws = cfg.weights or ([Fraction(2), Fraction(-1)] if cfg.xs is None else [Fraction(1)] * len(pts))
        for n in ns:
            yield {"points": pts, "weights": ws, "n": n, **common}
    elif identity == "moments":
        src = cfg.series or "1"
        for n in ns:
            yield {"fp": parse_polynomial(src), "n": n, "label": src, **common}
    elif identity == "mina-origin":
        xs = cfg.xs or [Fraction(0), Fraction(1, 2), Fraction(3)]
        n = len(xs) - 1
        f, label = _series_from(cfg, n, "1+3*x-2*x^2+x^3")
        for zv in _z_values(cfg, "2/3"):
            yield {"f": f, "z": parse_rat(zv), "xs": xs, "n": n, "label": label, **common}
    elif identity == "mina-point":
        src = cfg.series or "1+x^2"
        ms = cfg.ms or [0, 2, 3]
        t = cfg.t if cfg.t is not None else Fraction(1)
        yield {"fp": parse_polynomial(src), "ms": ms, "t": t, "n": len(ms) - 1, "label": src, **common}
    elif identity == "lemma1":
        if cfg.xs is None:
            polys = (PolyZ([2]), PolyZ([1, 3]), PolyZ([0, 0, 5]))
            xs = [Fraction(0), Fraction(1), Fraction(-1)]
        else:
            xs = cfg.xs
            polys = tuple(PolyZ([1] + [0] * (j - 1) + [j + 1]) if j else PolyZ([1]) for j in range(len(xs)))
        yield {"ps": PolyFamily(polys), "xs": xs, **common}
    else:
        raise ConfigError(f"no explicit case for {identity!r}")


def build_cases(cfg: RunConfig) -> list[Case]:
    cases: list[Case] = []
    for identity in cfg.selected():
        for kwargs in explicit_cases(identity, cfg):
            cases.append(Case(len(cases), identity, kwargs))
        # string seeds hash deterministically, independent of PYTHONHASHSEED
        rng = random.Random(f"{cfg.seed}:{identity}")
        nmax = max(cfg.n) if cfg.n else None
        for k in range(cfg.cases):
            kwargs = random_case(identity, rng, k, nmax)
            kwargs["oracle"] = cfg.oracle
            cases.append(Case(len(cases), identity, kwargs))
    return cases


def run_suite(cfg: RunConfig) -> tuple[list[Report], float]:
    cfg.validate()
    cases = build_cases(cfg)
    t0 = time.perf_counter()
    reports = run_cases(cases, cfg.jobs)
    return reports, (time.perf_counter() - t0) * 1000.0


def suite_json(cfg: RunConfig, reports: Sequence[Report], elapsed_ms: float) -> dict:
    passed = sum(r.passed for r in reports)
    summary = {"total": len(reports), "passed": passed, "failed": len(reports) - passed}
    if cfg.timings:
        summary["elapsed_ms"] = round(elapsed_ms, 3)
    return {
        "config": cfg.to_json(),
        "reports": [r.to_dict(cfg.timings) for r in reports],
        "summary": summary,
    }


def format_report_line(r: Report) -> str:
    status = "PASS" if r.passed else "FAIL"
    params = " ".join(f"{k}={v}" for k, v in r.params.items())
    line = f"{status} {r.identity:<18} {params}\n     computed={r.computed}  expected={r.expected}  ({r.elapsed_ms:.1f} ms)"
    for note in r.notes:
        line += f"\n     note: {note}"
    return line


# benchmark: fraction-free elimination vs the triangularizing product


@dataclass
class BenchRow:
    n: int
    bareiss_ms: float
    shortcut_ms: float
    max_bits: int
    det: str
    agree: bool
    det_degree: int | None = None

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "bareiss_ms": round(self.bareiss_ms, 3),
            "shortcut_ms": round(self.shortcut_ms, 3),
            "max_bits": self.max_bits,
            "det": self.det,
            "agree": self.agree,
        }
        if self.det_degree is not None:
            d["det_degree"] = self.det_degree
        return d


def bench_one(f: Series, n: int, symbolic: bool = False) -> BenchRow:
    """Determinant two ways: Bareiss, and the diagonal of ``b c``."""
    z = PolyZ.z() if symbolic else 1
    c = coeff_matrix(f, n, z)
    t0 = time.perf_counter()
    d1 = det_bareiss(c)
    t1 = time.perf_counter()
    bc = binomial_sign_matrix(n) @ c
    d2 = math.prod((bc[i, i] for i in range(n + 1)), start=Fraction(1))
    t2 = time.perf_counter()
    bits = max(max(bit_length(e) for e in c.entries), bit_length(d1))
    degree = None
    if symbolic:
        d1 = d1 if isinstance(d1, PolyZ) else PolyZ.const(d1)
        degree = d1.degree if d1 else -1
    return BenchRow(n, (t1 - t0) * 1000, (t2 - t1) * 1000, bits, render_value(d1), d1 == d2, degree)


def run_bench(nmax: int, seed: int, symbolic: bool = False, f: Series | None = None) -> list[BenchRow]:
    rng = random.Random(f"{seed}:bench")
    g = f if f is not None else rand_series(rng, nmax)
    return [bench_one(g, n, symbolic) for n in range(1, nmax + 1)]
