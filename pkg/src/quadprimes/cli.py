"""Command-line interface.

Subcommands: analyze (one polynomial end to end), scan (a coefficient
family), buchstab (identity check), lfun (L(1, chi_Delta) only), verify
(internal cross-check suite).

Settings resolve with precedence flag > environment (QUADPRIMES_*) > config
file (key=value lines) > built-in defaults. Exit codes: 0 success,
2 validation or usage, 3 budget exceeded, 4 consistency failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from dataclasses import dataclass
from math import isqrt

from . import __version__
from .analytic import buchstab, main_term_report, v_product, w_product
from .character import (
    is_fundamental_discriminant,
    kronecker,
    l_one,
    l_one_class_number_oracle,
    metrics,
)
from .errors import (
    DegenerateA,
    QuadprimesError,
    SpecParseError,
    ValidationError,
)
from .polynomial import enumeration_domain, roots_mod_prime, validate
from .primes import is_prime, primes_upto
from .records import RunRecord, append_record, to_json_line, utc_timestamp
from .sieve import SieveBudget, a_d_count, sieve_pi

DEFAULTS = {
    "max_n": 10**12,
    "max_sieve_prime": 2 * 10**6,
    "segment_size": 1 << 16,
    "threads": 1,
    "l_cutoff": 10**9,
    "tol": 1e-4,
    "records": "quadprimes-runs.jsonl",
    "format": "table",
}

_INT_KEYS = {"max_n", "max_sieve_prime", "segment_size", "threads", "l_cutoff"}
_FLOAT_KEYS = {"tol"}

ENV_PREFIX = "QUADPRIMES_"


@dataclass
class Settings:
    max_n: int
    max_sieve_prime: int
    segment_size: int
    threads: int
    l_cutoff: int
    tol: float
    records: str
    format: str

    def budget(self) -> SieveBudget:
        return SieveBudget(
            max_n=self.max_n,
            max_sieve_prime=self.max_sieve_prime,
            segment_size=self.segment_size,
            threads=self.threads,
        )


def _parse_int(text: str) -> int:
    t = text.strip().replace("_", "")
    try:
        return int(t, 10)
    except ValueError:
        pass
    try:
        v = float(t)
    except ValueError:
        raise SpecParseError(f"not an integer: {text!r}") from None
    if not v.is_integer():
        raise SpecParseError(f"not an integer: {text!r}")
    return int(v)


def _coerce(key: str, raw: str):
    if key in _INT_KEYS:
        return _parse_int(raw)
    if key in _FLOAT_KEYS:
        try:
            return float(raw)
        except ValueError:
            raise SpecParseError(f"not a number: {raw!r}") from None
    if key == "format" and raw not in ("table", "records"):
        raise SpecParseError(f"format must be 'table' or 'records', got {raw!r}")
    return raw


def load_config_file(path: str) -> dict:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise SpecParseError(f"cannot read config {path}: {exc}") from None
    for lineno, line in enumerate(lines, 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise SpecParseError(f"{path}:{lineno}: expected key=value")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in DEFAULTS:
            raise SpecParseError(f"{path}:{lineno}: unknown setting {key!r}")
        out[key] = _coerce(key, raw.strip())
    return out


def resolve_settings(args: argparse.Namespace) -> Settings:
    values = dict(DEFAULTS)
    config_path = getattr(args, "config", None) or os.environ.get(ENV_PREFIX + "CONFIG")
    if config_path:
        values.update(load_config_file(config_path))
    for key in DEFAULTS:
        env = os.environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            values[key] = _coerce(key, env)
    flag_map = {
        "max_n": "budget_max_n",
        "max_sieve_prime": "budget_max_sieve_prime",
        "segment_size": "budget_segment_size",
        "l_cutoff": "budget_l_cutoff",
        "threads": "threads",
        "tol": "tol",
        "records": "records",
        "format": "format",
    }
    for key, attr in flag_map.items():
        flag = getattr(args, attr, None)
        if flag is not None:
            values[key] = flag
    return Settings(**values)


def _add_budget_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="settings file with key=value lines")
    sub.add_argument("--budget-max-n", type=_parse_int, default=None, metavar="INT")
    sub.add_argument(
        "--budget-max-sieve-prime", type=_parse_int, default=None, metavar="INT"
    )
    sub.add_argument(
        "--budget-segment-size", type=_parse_int, default=None, metavar="INT"
    )
    sub.add_argument("--budget-l-cutoff", type=_parse_int, default=None, metavar="INT")
    sub.add_argument("--threads", type=int, default=None)
    sub.add_argument("--format", choices=("table", "records"), default=None)


def _add_poly_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("-a", type=int, required=True, help="leading coefficient")
    sub.add_argument("-b", type=int, required=True, help="linear coefficient")
    sub.add_argument("-c", type=int, required=True, help="constant term")
    sub.add_argument("-N", type=_parse_int, required=True, help="value ceiling")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadprimes",
        description="Exact prime counts and sieve diagnostics for a*x^2 + b*x + c",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p_an = subs.add_parser("analyze", help="full report for one polynomial")
    _add_poly_flags(p_an)
    p_an.add_argument("--tol", type=float, default=None, help="L(1,chi) error bound")
    p_an.add_argument("--records", default=None, help="JSONL run log path")
    p_an.add_argument("--no-record", action="store_true", help="skip the run log")
    _add_budget_flags(p_an)
    p_an.set_defaults(func=cmd_analyze)

    p_sc = subs.add_parser("scan", help="sweep coefficient ranges")
    p_sc.add_argument("-a", type=int, default=None)
    p_sc.add_argument("-b", type=int, default=None)
    p_sc.add_argument("-c", type=int, default=None)
    range_help = "inclusive bounds; write --%s-range=-3:3 when LO is negative"
    p_sc.add_argument("--a-range", metavar="LO:HI", default=None, help=range_help % "a")
    p_sc.add_argument("--b-range", metavar="LO:HI", default=None, help=range_help % "b")
    p_sc.add_argument("--c-range", metavar="LO:HI", default=None, help=range_help % "c")
    p_sc.add_argument("-N", type=_parse_int, required=True)
    p_sc.add_argument("--tol", type=float, default=None)
    p_sc.add_argument("--records", default=None)
    p_sc.add_argument("--no-record", action="store_true")
    _add_budget_flags(p_sc)
    p_sc.set_defaults(func=cmd_scan)

    p_bu = subs.add_parser("buchstab", help="evaluate the sifting identity exactly")
    _add_poly_flags(p_bu)
    p_bu.add_argument("--z", type=float, required=True, help="sifting level")
    p_bu.add_argument(
        "--include-sqrt-n",
        action="store_true",
        help="close the prime range at sqrt(N) on both sides of the identity",
    )
    p_bu.add_argument("--per-prime", action="store_true", help="print each S(A_p, p)")
    _add_budget_flags(p_bu)
    p_bu.set_defaults(func=cmd_buchstab)

    p_lf = subs.add_parser("lfun", help="L(1, chi_Delta) with a rigorous tail bound")
    p_lf.add_argument("--delta", type=_parse_int, required=True)
    p_lf.add_argument("--tol", type=float, default=None)
    _add_budget_flags(p_lf)
    p_lf.set_defaults(func=cmd_lfun)

    p_ve = subs.add_parser("verify", help="run the internal cross-check suite")
    p_ve.add_argument("--seed", type=int, default=20260814)
    _add_budget_flags(p_ve)
    p_ve.set_defaults(func=cmd_verify)

    return parser


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _print_table(rows: list[tuple[str, object]]) -> None:
    width = max(len(label) for label, _ in rows) + 2
    for label, value in rows:
        print(f"{label:<{width}}{_fmt(value)}")


def _analyze_one(
    f, n_value: int, settings: Settings
) -> tuple[RunRecord, list[tuple[str, object]]]:
    result = sieve_pi(f, n_value, budget=settings.budget())
    l_value, l_bound = l_one(f.delta, settings.tol, cutoff_cap=settings.l_cutoff)
    try:
        met = metrics(f, n_value, result.cardinality_a, l_value, l_bound)
    except DegenerateA:
        met = None
    report = main_term_report(
        f, n_value, result, met.beta if met else None
    )
    record = RunRecord(
        a=f.a,
        b=f.b,
        c=f.c,
        n_value=n_value,
        pi_f=result.pi_f,
        cardinality_a=result.cardinality_a,
        v_of_a=report.v_of_a,
        main_term=report.main_term,
        relative_error=report.relative_error,
        l_one=l_value,
        l_one_bound=l_bound,
        beta=met.beta if met else None,
        beta_bound=met.beta_radius if met else None,
        hypotheses_hold=met.hypotheses_hold if met else None,
        version=__version__,
        timestamp=utc_timestamp(),
    )
    domain_text = " union ".join(f"[{lo}, {hi}]" for lo, hi in result.domain.intervals)
    rows: list[tuple[str, object]] = [
        ("polynomial", str(f)),
        ("delta", f.delta),
        ("N", n_value),
        ("domain", domain_text or "(empty)"),
        ("|A|", result.cardinality_a),
        ("pi_f", result.pi_f),
        ("L(1,chi)", l_value),
        ("L bound", l_bound),
        ("beta", met.beta if met else None),
        ("beta radius", met.beta_radius if met else None),
        ("B", met.b_cap if met else None),
        ("g(Delta)", met.g_delta if met else None),
        ("hypotheses", "hold" if met and met.hypotheses_hold else "fail" if met else None),
        ("V(|A|)", report.v_of_a),
        ("main term", report.main_term),
        ("relative error", report.relative_error),
        ("theorem bound", report.theorem_bound),
    ]
    return record, rows


def _require_positive_n(n_value: int) -> None:
    if n_value < 1:
        raise SpecParseError("N must be >= 1")


def cmd_analyze(args: argparse.Namespace, settings: Settings) -> int:
    _require_positive_n(args.N)
    f = validate(args.a, args.b, args.c)
    record, rows = _analyze_one(f, args.N, settings)
    if not args.no_record:
        append_record(settings.records, record)
    if settings.format == "records":
        print(to_json_line(record))
    else:
        _print_table(rows)
    return 0


def _parse_range(text: str) -> range:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise SpecParseError(f"range must be LO:HI, got {text!r}")
    lo_i, hi_i = _parse_int(lo), _parse_int(hi)
    if hi_i < lo_i:
        raise SpecParseError(f"empty range {text!r}")
    return range(lo_i, hi_i + 1)


def _coef_values(args: argparse.Namespace, name: str) -> range:
    single = getattr(args, name)
    span = getattr(args, f"{name}_range")
    if single is not None and span is not None:
        raise SpecParseError(f"give -{name} or --{name}-range, not both")
    if span is not None:
        return _parse_range(span)
    if single is not None:
        return range(single, single + 1)
    raise SpecParseError(f"missing -{name} or --{name}-range")


def cmd_scan(args: argparse.Namespace, settings: Settings) -> int:
    _require_positive_n(args.N)
    a_vals = _coef_values(args, "a")
    b_vals = _coef_values(args, "b")
    c_vals = _coef_values(args, "c")
    n_value = args.N
    header = f"{'a':>6} {'b':>6} {'c':>6} {'delta':>12} {'|A|':>8} {'pi_f':>8} " \
             f"{'main':>14} {'rel_err':>11}  status"
    if settings.format == "table":
        print(header)
    exit_code = 0
    for a in a_vals:
        for b in b_vals:
            for c in c_vals:
                prefix = f"{a:>6} {b:>6} {c:>6}"
                try:
                    f = validate(a, b, c)
                except ValidationError as exc:
                    if settings.format == "table":
                        print(f"{prefix} {'-':>12} {'-':>8} {'-':>8} "
                              f"{'-':>14} {'-':>11}  skip:{type(exc).__name__}")
                    else:
                        print(f"skip a={a} b={b} c={c} {type(exc).__name__}", file=sys.stderr)
                    continue
                try:
                    record, _ = _analyze_one(f, n_value, settings)
                except QuadprimesError as exc:
                    exit_code = max(exit_code, exc.exit_code)
                    if settings.format == "table":
                        print(f"{prefix} {f.delta:>12} {'-':>8} {'-':>8} "
                              f"{'-':>14} {'-':>11}  error:{type(exc).__name__}")
                    else:
                        print(f"error a={a} b={b} c={c} {type(exc).__name__}: {exc}",
                              file=sys.stderr)
                    continue
                if not args.no_record:
                    append_record(settings.records, record)
                if settings.format == "records":
                    print(to_json_line(record))
                else:
                    rel = record.relative_error
                    print(f"{prefix} {f.delta:>12} {record.cardinality_a:>8} "
                          f"{record.pi_f:>8} {record.main_term:>14.6g} "
                          f"{(f'{rel:+.3e}' if rel is not None else '-'):>11}  ok")
                sys.stdout.flush()
    return exit_code


def cmd_buchstab(args: argparse.Namespace, settings: Settings) -> int:
    _require_positive_n(args.N)
    f = validate(args.a, args.b, args.c)
    if args.z < 2 or args.z * args.z > args.N:
        raise SpecParseError("--z must satisfy 2 <= z <= sqrt(N)")
    report = buchstab(
        f, args.N, args.z,
        include_sqrt_n=args.include_sqrt_n,
        budget=settings.budget(),
    )
    if settings.format == "records":
        payload = {
            "schema": 1,
            "a": f.a, "b": f.b, "c": f.c, "n_value": args.N,
            "z": report.z,
            "s_a_z": report.s_a_z,
            "s_a_sqrt_n": report.s_a_sqrt_n,
            "s1": report.s1, "s2": report.s2, "s3": report.s3,
            "identity_residual": report.identity_residual,
            "include_sqrt_n": report.include_sqrt_n,
        }
        print(json.dumps(payload, separators=(",", ":")))
    else:
        rows = [
            ("polynomial", str(f)),
            ("N", args.N),
            ("z", report.z),
            ("|A|", report.a_count),
            ("S(A, z)", report.s_a_z),
            ("S(A, sqrt N)", report.s_a_sqrt_n),
            ("s1 (p <= A/z^2)", report.s1),
            ("s2 (A/z^2 < p <= A)", report.s2),
            ("s3 (p > A)", report.s3),
            ("residual", report.identity_residual),
        ]
        _print_table(rows)
        if args.per_prime:
            for p, count in report.per_prime:
                print(f"  S(A_{p}, {p}) = {count}")
    if report.identity_residual != 0:
        print("consistency failure: nonzero Buchstab residual", file=sys.stderr)
        return 4
    return 0


def cmd_lfun(args: argparse.Namespace, settings: Settings) -> int:
    value, bound = l_one(args.delta, settings.tol, cutoff_cap=settings.l_cutoff)
    oracle = None
    if -(10**6) < args.delta < 0 and is_fundamental_discriminant(args.delta):
        oracle = l_one_class_number_oracle(args.delta)
    if settings.format == "records":
        payload = {
            "schema": 1,
            "delta": args.delta,
            "l_one": value,
            "error_bound": bound,
            "class_number_oracle": oracle,
        }
        print(json.dumps(payload, separators=(",", ":")))
    else:
        rows = [("delta", args.delta), ("L(1,chi)", value), ("error bound", bound)]
        if oracle is not None:
            rows.append(("class-number oracle", oracle))
            rows.append(("|difference|", abs(value - oracle)))
        _print_table(rows)
    if oracle is not None and abs(value - oracle) > bound + 1e-12:
        print("consistency failure: partial sum disagrees with oracle", file=sys.stderr)
        return 4
    return 0


# ---------------------------------------------------------------------------
# verify: randomized cross-checks of independent code paths


def _random_poly(rng: random.Random):
    while True:
        a = rng.randint(-8, 8)
        b = rng.randint(-30, 30)
        c = rng.randint(-60, 60)
        try:
            return validate(a, b, c)
        except ValidationError:
            continue


def _check_kronecker_euler(rng: random.Random) -> str:
    odd_primes = [p for p in primes_upto(500) if p > 2]
    trials = 0
    for _ in range(400):
        delta = rng.randint(-400, 400)
        p = rng.choice(odd_primes)
        euler = pow(delta % p, (p - 1) // 2, p)
        expect = 0 if euler == 0 else 1 if euler == 1 else -1
        got = kronecker(delta, p)
        assert got == expect, (delta, p, got, expect)
        trials += 1
    # complete multiplicativity on random pairs
    for _ in range(400):
        delta = rng.choice((-163, -20, 5, 13, 21, -4, 8, -7))
        m, n = rng.randint(1, 4000), rng.randint(1, 4000)
        assert kronecker(delta, m * n) == kronecker(delta, m) * kronecker(delta, n)
        assert kronecker(delta, m + abs(delta)) == kronecker(delta, m)
        trials += 1
    return f"{trials} trials"


def _check_roots_vs_enumeration(rng: random.Random) -> str:
    plist = primes_upto(97)
    trials = 0
    for _ in range(40):
        f = _random_poly(rng)
        for p in plist:
            brute = tuple(n for n in range(p) if f(n) % p == 0)
            got = roots_mod_prime(f, p).roots
            assert got == brute, (f, p, got, brute)
            assert len(got) <= 2
            trials += 1
    return f"{trials} prime/poly pairs"


def _check_rho_multiplicative(rng: random.Random) -> str:
    from math import gcd

    from .polynomial import rho

    trials = 0
    for _ in range(60):
        f = _random_poly(rng)
        d1, d2 = rng.randint(1, 120), rng.randint(1, 120)
        if gcd(d1, d2) != 1:
            continue
        d = d1 * d2
        brute = sum(1 for n in range(d) if f(n) % d == 0)
        assert rho(f, d) == brute == rho(f, d1) * rho(f, d2), (f, d1, d2)
        trials += 1
    return f"{trials} coprime pairs"


def _check_domain_brute(rng: random.Random) -> str:
    trials = 0
    for _ in range(120):
        f = _random_poly(rng)
        n_value = rng.randint(1, 5000)
        dom = enumeration_domain(f, n_value)
        if dom.intervals:
            span_lo = min(lo for lo, _ in dom.intervals) - 60
            span_hi = max(hi for _, hi in dom.intervals) + 60
        else:
            span_lo, span_hi = -400, 400
        member = set()
        for lo, hi in dom.intervals:
            member.update(range(lo, hi + 1))
        brute = {n for n in range(span_lo, span_hi + 1) if 0 <= f(n) <= n_value}
        assert member == brute, (f, n_value)
        assert dom.cardinality_a == len(brute)
        if dom.x_length >= 2:
            assert dom.x_length - 2 < dom.cardinality_a < dom.x_length + 2
        trials += 1
    return f"{trials} domains"


def _check_sieve_direct(rng: random.Random, settings: Settings) -> str:
    trials = 0
    for _ in range(25):
        f = _random_poly(rng)
        n_value = rng.randint(50, 20000)
        res = sieve_pi(f, n_value, budget=settings.budget())
        direct = 0
        for lo, hi in res.domain.intervals:
            direct += sum(1 for n in range(lo, hi + 1) if is_prime(f(n)))
        assert res.pi_f == direct, (f, n_value, res.pi_f, direct)
        trials += 1
    return f"{trials} sieve runs"


def _check_lfun_oracle(settings: Settings) -> str:
    cases = (-3, -4, -15, -55, -163)
    for delta in cases:
        value, bound = l_one(delta, 1e-6, cutoff_cap=settings.l_cutoff)
        oracle = l_one_class_number_oracle(delta)
        assert abs(value - oracle) <= bound + 1e-12, (delta, value, oracle, bound)
    return f"{len(cases)} discriminants"


def _check_buchstab(rng: random.Random, settings: Settings) -> str:
    trials = 0
    for _ in range(30):
        f = _random_poly(rng)
        n_value = rng.randint(200, 30000)
        z = rng.uniform(2, isqrt(n_value))
        flag = rng.random() < 0.5
        rep = buchstab(f, n_value, z, include_sqrt_n=flag, budget=settings.budget())
        assert rep.identity_residual == 0, (f, n_value, z, flag)
        trials += 1
    return f"{trials} identities"


def _check_congruence_counts(rng: random.Random) -> str:
    trials = 0
    for _ in range(80):
        f = _random_poly(rng)
        n_value = rng.randint(100, 20000)
        d = rng.randint(1, 200)
        dom = enumeration_domain(f, n_value)
        cc = a_d_count(f, n_value, d, domain=dom)
        brute = 0
        for lo, hi in dom.intervals:
            brute += sum(1 for n in range(lo, hi + 1) if f(n) % d == 0)
        assert cc.a_d == brute, (f, n_value, d)
        assert abs(cc.r_d) < 2 * cc.rho_d or cc.r_d == 0
        if len(dom.intervals) == 1:
            assert cc.within_rho, (f, n_value, d)
        trials += 1
    return f"{trials} moduli"


def _check_thread_determinism(settings: Settings) -> str:
    f = validate(1, 1, 41)
    one = sieve_pi(f, 10**5, budget=SieveBudget(threads=1))
    four = sieve_pi(f, 10**5, budget=SieveBudget(threads=4))
    assert one == four
    return "threads 1 == 4"


def _check_wv_ratio(rng: random.Random) -> str:
    # Diagnostic only: record the empirical bracket of W(u)/V(u), never a
    # hard bound.  Ratios must merely be positive and finite.
    lo, hi = math.inf, 0.0
    samples = 0
    for _ in range(60):
        f = _random_poly(rng)
        u = rng.uniform(2.0, 500.0)
        v = v_product(f, u)
        if v == 0.0:
            continue
        ratio = w_product(f.delta, u) / v
        assert math.isfinite(ratio) and ratio > 0.0, (f, u, ratio)
        lo, hi = min(lo, ratio), max(hi, ratio)
        samples += 1
    assert samples > 0
    bracket = max(hi, 1.0 / lo)
    return f"{samples} samples, W/V in [{lo:.4g}, {hi:.4g}], C={bracket:.4g}"


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    rng = random.Random(args.seed)
    checks = [
        ("kronecker-euler", lambda: _check_kronecker_euler(rng)),
        ("roots-mod-prime", lambda: _check_roots_vs_enumeration(rng)),
        ("rho-multiplicative", lambda: _check_rho_multiplicative(rng)),
        ("enumeration-domain", lambda: _check_domain_brute(rng)),
        ("sieve-vs-direct", lambda: _check_sieve_direct(rng, settings)),
        ("lfun-class-number", lambda: _check_lfun_oracle(settings)),
        ("buchstab-residual", lambda: _check_buchstab(rng, settings)),
        ("congruence-counts", lambda: _check_congruence_counts(rng)),
        ("thread-determinism", lambda: _check_thread_determinism(settings)),
        ("wv-ratio", lambda: _check_wv_ratio(rng)),
    ]
    failures = 0
    for name, run in checks:
        try:
            detail = run()
        except AssertionError as exc:
            failures += 1
            print(f"FAIL {name}: {exc}")
        else:
            print(f"ok   {name} ({detail})")
    print(f"{len(checks)} checks, {failures} failed")
    return 4 if failures else 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = resolve_settings(args)
        return args.func(args, settings)
    except QuadprimesError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
