"""Segmented factoring sieve over the values f(n) on the enumeration domain.

Every n in the domain gets its value f(n) fully factored over the primes
p <= sqrt(max f): each residue class n = r (mod p) with f(r) = 0 (mod p) is
struck once, dividing out the full power of p. Whatever cofactor survives is
either 1 or a single prime above the strike limit, so primality of f(n) and
its least prime factor come out of the same pass.

The least-prime-factor histogram keys every lpf up to isqrt(N) exactly and
pools anything larger into a single bucket, which is all the resolution the
sifting counts S(A, z) need for z <= isqrt(N) + 1.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import isqrt

from .errors import BudgetExceeded, NotPrime, ResolutionExceeded
from .polynomial import (
    AdmissiblePolynomial,
    EnumerationDomain,
    enumeration_domain,
    roots_mod,
    roots_mod_prime,
)
from .primes import is_prime, primes_upto

DEFAULT_MAX_N = 10**12
DEFAULT_MAX_SIEVE_PRIME = 2 * 10**6
DEFAULT_SEGMENT_SIZE = 1 << 16


@dataclass(frozen=True)
class SieveBudget:
    """Resource caps for a sieve run. Exceeding one raises BudgetExceeded
    before any heavy allocation happens."""

    max_n: int = DEFAULT_MAX_N
    max_sieve_prime: int = DEFAULT_MAX_SIEVE_PRIME
    segment_size: int = DEFAULT_SEGMENT_SIZE
    threads: int = 1


@dataclass(frozen=True)
class SieveResult:
    """Exact counts from one sieve pass.

    lpf_histogram maps least prime factors <= key_cap to multiplicities;
    large_prime_count pools values whose least prime factor exceeds key_cap
    (necessarily prime values themselves when key_cap = isqrt(N) and the
    value is a single prime above the strike limit, or composites whose
    smallest factor is large). unit_count counts f(n) = 1, zero_count counts
    f(n) = 0 (always 0 for admissible f, kept as a consistency check).
    """

    pi_f: int
    cardinality_a: int
    n_value: int
    key_cap: int
    max_value: int
    unit_count: int
    zero_count: int
    large_prime_count: int
    lpf_histogram: dict[int, int] = field(repr=False)
    domain: EnumerationDomain = field(repr=False)


def _vertex_candidates(f: AdmissiblePolynomial, lo: int, hi: int) -> list[int]:
    # f is convex or concave, so its max over [lo, hi] is at an endpoint or
    # at one of the integers flanking the vertex -b/(2a)
    cands = [lo, hi]
    num, den = -f.b, 2 * f.a
    floor_v = num // den
    for n in (floor_v, floor_v + 1):
        if lo <= n <= hi:
            cands.append(n)
    return cands


def _max_value(f: AdmissiblePolynomial, domain: EnumerationDomain) -> int:
    best = 0
    for lo, hi in domain.intervals:
        for n in _vertex_candidates(f, lo, hi):
            v = f(n)
            if v > best:
                best = v
    return best


def _segment_counts(
    f: AdmissiblePolynomial,
    lo: int,
    hi: int,
    strikes: list[tuple[int, tuple[int, ...]]],
    key_cap: int,
) -> tuple[int, int, int, int, Counter]:
    length = hi - lo + 1
    values = [f(n) for n in range(lo, hi + 1)]
    nfac = [0] * length
    lpf = [0] * length
    for p, residues in strikes:
        for r in residues:
            for i in range((r - lo) % p, length, p):
                v = values[i]
                if v == 0:
                    continue
                e = 0
                while v % p == 0:
                    v //= p
                    e += 1
                values[i] = v
                nfac[i] += e
                if lpf[i] == 0:
                    lpf[i] = p
    pi_count = units = zeros = large = 0
    hist: Counter = Counter()
    for i in range(length):
        v = values[i]
        if v == 0:
            zeros += 1
            continue
        total = nfac[i]
        if v > 1:
            # cofactor above the strike limit is a single prime
            total += 1
            if lpf[i] == 0:
                lpf[i] = v
        if total == 0:
            units += 1
            continue
        if total == 1:
            pi_count += 1
        if lpf[i] <= key_cap:
            hist[lpf[i]] += 1
        else:
            large += 1
    return pi_count, units, zeros, large, hist


def sieve_pi(
    f: AdmissiblePolynomial, n_value: int, budget: SieveBudget | None = None
) -> SieveResult:
    """Count primes among f(n) on the enumeration domain and classify every
    value by least prime factor. Deterministic for any thread count: segments
    are merged in submission order and all counts are integers."""
    budget = budget or SieveBudget()
    if n_value < 1:
        raise ValueError("n_value must be >= 1")
    if n_value > budget.max_n:
        raise BudgetExceeded(f"N = {n_value} exceeds budget max_n = {budget.max_n}")
    domain = enumeration_domain(f, n_value)
    key_cap = isqrt(n_value)
    if not domain.intervals:
        return SieveResult(0, 0, n_value, key_cap, 0, 0, 0, 0, {}, domain)
    vmax = _max_value(f, domain)
    strike_limit = isqrt(vmax)
    if strike_limit > budget.max_sieve_prime:
        raise BudgetExceeded(
            f"sieve needs primes to {strike_limit}, budget max_sieve_prime = "
            f"{budget.max_sieve_prime}"
        )
    strikes = []
    for p in primes_upto(strike_limit):
        roots = roots_mod_prime(f, p).roots
        assert len(roots) <= 2, "a quadratic has at most two roots mod p"
        if roots:
            strikes.append((p, roots))

    tasks = []
    seg = max(budget.segment_size, 16)
    for lo, hi in domain.intervals:
        start = lo
        while start <= hi:
            stop = min(start + seg - 1, hi)
            tasks.append((start, stop))
            start = stop + 1

    def worker(span: tuple[int, int]):
        return _segment_counts(f, span[0], span[1], strikes, key_cap)

    if budget.threads > 1:
        with ThreadPoolExecutor(max_workers=budget.threads) as pool:
            partials = list(pool.map(worker, tasks))
    else:
        partials = [worker(t) for t in tasks]

    pi_f = units = zeros = large = 0
    hist: Counter = Counter()
    for d_pi, d_units, d_zeros, d_large, d_hist in partials:
        pi_f += d_pi
        units += d_units
        zeros += d_zeros
        large += d_large
        hist.update(d_hist)

    total = units + zeros + large + sum(hist.values())
    assert total == domain.cardinality_a, "bucket totals must partition the domain"
    assert zeros == 0, "admissible f has no integer roots"
    return SieveResult(
        pi_f=pi_f,
        cardinality_a=domain.cardinality_a,
        n_value=n_value,
        key_cap=key_cap,
        max_value=vmax,
        unit_count=units,
        zero_count=zeros,
        large_prime_count=large,
        lpf_histogram=dict(hist),
        domain=domain,
    )


def s_count(result: SieveResult, z: float) -> int:
    """S(A, z) = #{n in the domain : gcd(f(n), P(z)) = 1}, P(z) the product of
    primes strictly below z. Exact for 2 <= z <= key_cap + 1."""
    if z < 2:
        raise ValueError("z must be >= 2")
    if z > result.key_cap + 1:
        raise ResolutionExceeded(
            f"z = {z} beyond histogram resolution {result.key_cap + 1}"
        )
    count = result.unit_count + result.large_prime_count
    count += sum(c for q, c in result.lpf_histogram.items() if q >= z)
    if z <= 2:
        # nothing is sifted: zero values survive the empty product too
        count += result.zero_count
    return count


def s_p_count(
    f: AdmissiblePolynomial,
    n_value: int,
    p: int,
    *,
    result: SieveResult | None = None,
    budget: SieveBudget | None = None,
) -> int:
    """S(A_p, p) = #{n : p | f(n) and no prime below p divides f(n)}, i.e. the
    multiplicity of p as a least prime factor. Requires prime p <= sqrt(N)."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p * p > n_value:
        raise ValueError("s_p_count requires p <= sqrt(N)")
    res = result if result is not None else sieve_pi(f, n_value, budget=budget)
    return res.lpf_histogram.get(p, 0)


@dataclass(frozen=True)
class CongruenceCount:
    """|A_d| split as rho(d)/d * |A| + r_d with r_d exact up to rounding.

    within_rho records whether |r_d| <= rho(d); that holds provably when the
    domain is a single interval but can fail on split domains, so it is
    reported rather than asserted.
    """

    d: int
    a_d: int
    rho_d: int
    r_d: float
    within_rho: bool


def a_d_count(
    f: AdmissiblePolynomial,
    n_value: int,
    d: int,
    *,
    domain: EnumerationDomain | None = None,
) -> CongruenceCount:
    """Exact |A_d| = #{n in the domain : f(n) = 0 (mod d)} by counting each
    root's residue class, plus the remainder against the expected density."""
    if d < 1:
        raise ValueError("modulus must be >= 1")
    dom = domain if domain is not None else enumeration_domain(f, n_value)
    roots = roots_mod(f, d).roots
    a_d = 0
    for lo, hi in dom.intervals:
        for r in roots:
            a_d += (hi - r) // d - (lo - 1 - r) // d
    rho_d = len(roots)
    r_num = a_d * d - rho_d * dom.cardinality_a
    # each interval and root contributes an error below 1 in absolute value
    assert abs(r_num) < 2 * rho_d * d or r_num == 0
    r_d = r_num / d
    return CongruenceCount(
        d=d,
        a_d=a_d,
        rho_d=rho_d,
        r_d=r_d,
        within_rho=abs(r_num) <= rho_d * d,
    )
