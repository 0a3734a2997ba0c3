"""Singular-series products, the Buchstab decomposition of the sifting
function, and the main-term comparison A * V(A) against the exact prime
count.

V is accumulated as an exact big-integer rational and rounded once at the
end; the Buchstab identity is evaluated entirely in integers so its residual
is a hard consistency check, not a float artifact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import isqrt

from .character import kronecker
from .errors import BudgetExceeded, DegenerateMainTerm
from .polynomial import AdmissiblePolynomial, roots_mod_prime
from .primes import primes_upto
from .sieve import SieveBudget, SieveResult, s_count, sieve_pi

DEFAULT_PRIME_BUDGET = 10**7


def _balanced_product(factors: list[int]) -> int:
    # pairing similar-sized operands keeps big-int multiplies near O(n log n)
    if not factors:
        return 1
    while len(factors) > 1:
        nxt = [a * b for a, b in zip(factors[::2], factors[1::2])]
        if len(factors) % 2:
            nxt.append(factors[-1])
        factors = nxt
    return factors[0]


def _primes_below(z: float, prime_budget: int) -> list[int]:
    if z < 2:
        raise ValueError("z must be >= 2")
    if z > prime_budget:
        raise BudgetExceeded(f"prime enumeration to {z} exceeds budget {prime_budget}")
    limit = int(z)
    return [p for p in primes_upto(limit) if p < z]


def v_product(
    f: AdmissiblePolynomial, z: float, *, prime_budget: int = DEFAULT_PRIME_BUDGET
) -> float:
    """V(z) = prod_{p < z} (1 - rho(p)/p), exact rational until the final
    rounding. Equals 1 for z = 2 (empty product)."""
    nums: list[int] = []
    dens: list[int] = []
    for p in _primes_below(z, prime_budget):
        r = len(roots_mod_prime(f, p).roots)
        if r:
            if r == p:
                return 0.0
            nums.append(p - r)
            dens.append(p)
    return _balanced_product(nums) / _balanced_product(dens)


def w_product(
    delta: int, u: float, *, prime_budget: int = DEFAULT_PRIME_BUDGET
) -> float:
    """W(u) = prod_{p < u} (1 - 1/p)(1 - chi_Delta(p)/p), exact rational until
    the final rounding."""
    nums: list[int] = []
    dens: list[int] = []
    for p in _primes_below(u, prime_budget):
        chi_p = kronecker(delta, p)
        nums.append((p - 1) * (p - chi_p))
        dens.append(p * p)
    return _balanced_product(nums) / _balanced_product(dens)


def delta_sum(
    delta: int, x: float, a_count: int, *, prime_budget: int = DEFAULT_PRIME_BUDGET
) -> float:
    """delta(x) = sum_{x <= p <= A} lambda(p)/p with lambda(p) = 1 + chi_Delta(p),
    compensated summation. Zero when x > A."""
    if x < 2:
        raise ValueError("x must be >= 2")
    if a_count < 1:
        raise ValueError("a_count must be >= 1")
    if a_count > prime_budget:
        raise BudgetExceeded(f"prime enumeration to {a_count} exceeds budget {prime_budget}")
    terms = [
        (1 + kronecker(delta, p)) / p
        for p in primes_upto(a_count)
        if p >= x
    ]
    return math.fsum(terms)


@dataclass(frozen=True)
class BuchstabReport:
    """One application of Buchstab's identity

        S(A, z) - S(A, sqrt(N)) = sum_{z <= p < sqrt(N)} S(A_p, p)

    with the right-hand side split at A/z^2 and A into s1 + s2 + s3. All
    quantities are integers; identity_residual must be 0. include_sqrt_n
    switches the convention to a closed prime range z <= p <= sqrt(N) and
    simultaneously sifts S(A, sqrt(N)) by primes up to and including sqrt(N),
    which keeps the identity exact either way.
    """

    z: float
    n_value: int
    a_count: int
    s_a_z: int
    s_a_sqrt_n: int
    per_prime: tuple[tuple[int, int], ...]
    s1: int
    s2: int
    s3: int
    identity_residual: int
    include_sqrt_n: bool


def _survivors_lpf_sq_at_least(result: SieveResult, n_value: int, strict: bool) -> int:
    """#{n : lpf(f(n))^2 > N} (strict) or >= N, via exact integer predicates.

    The pooled bucket holds lpf >= isqrt(N) + 1, whose square always exceeds
    N, so the histogram resolves both variants exactly.
    """
    count = result.unit_count + result.large_prime_count
    for q, c in result.lpf_histogram.items():
        qq = q * q
        if qq > n_value or (not strict and qq == n_value):
            count += c
    return count


def buchstab(
    f: AdmissiblePolynomial,
    n_value: int,
    z: float,
    *,
    include_sqrt_n: bool = False,
    budget: SieveBudget | None = None,
    result: SieveResult | None = None,
) -> BuchstabReport:
    """Evaluate both sides of Buchstab's identity exactly. Requires
    2 <= z <= sqrt(N)."""
    if z < 2:
        raise ValueError("z must be >= 2")
    if z * z > n_value:
        raise ValueError("z must satisfy z^2 <= N")
    res = result if result is not None else sieve_pi(f, n_value, budget=budget)
    s_a_z = s_count(res, z)
    s_sqrt = _survivors_lpf_sq_at_least(res, n_value, strict=include_sqrt_n)

    hist = res.lpf_histogram
    per_prime = []
    for p in primes_upto(isqrt(n_value)):
        if p < z:
            continue
        pp = p * p
        if pp > n_value or (not include_sqrt_n and pp == n_value):
            continue
        per_prime.append((p, hist.get(p, 0)))

    a_count = res.cardinality_a
    cut_low = a_count / (z * z)
    s1 = s2 = s3 = 0
    for p, c in per_prime:
        if p <= cut_low:
            s1 += c
        elif p <= a_count:
            s2 += c
        else:
            s3 += c

    residual = s_a_z - s_sqrt - (s1 + s2 + s3)
    return BuchstabReport(
        z=z,
        n_value=n_value,
        a_count=a_count,
        s_a_z=s_a_z,
        s_a_sqrt_n=s_sqrt,
        per_prime=tuple(per_prime),
        s1=s1,
        s2=s2,
        s3=s3,
        identity_residual=residual,
        include_sqrt_n=include_sqrt_n,
    )


@dataclass(frozen=True)
class MainTermReport:
    """pi_f(N) against the predicted main term A * V(A).

    relative_error is (pi_f - main_term) / main_term, None when the main term
    is zero or the domain is empty. theorem_bound = exp(-sqrt(beta)/6) is the
    error quality the comparison is judged against when beta > 0.
    """

    pi_f: int
    a_count: int
    v_of_a: float
    main_term: float
    relative_error: float | None
    theorem_bound: float | None
    degenerate: bool


def main_term_report(
    f: AdmissiblePolynomial,
    n_value: int,
    result: SieveResult | None = None,
    beta: float | None = None,
    *,
    budget: SieveBudget | None = None,
    prime_budget: int = DEFAULT_PRIME_BUDGET,
) -> MainTermReport:
    """Compare the exact prime count against A * V(A). Raises
    DegenerateMainTerm when A > 0 but V(A) vanishes; flags (rather than
    raises) the empty-domain case."""
    res = result if result is not None else sieve_pi(f, n_value, budget=budget)
    a_count = res.cardinality_a
    if a_count == 0:
        return MainTermReport(res.pi_f, 0, 1.0, 0.0, None, None, True)
    v = v_product(f, a_count, prime_budget=prime_budget) if a_count >= 2 else 1.0
    main = a_count * v
    if main == 0.0:
        raise DegenerateMainTerm(
            f"V({a_count}) = 0: some prime divides every value of f"
        )
    rel = (res.pi_f - main) / main
    bound = math.exp(-math.sqrt(beta) / 6.0) if beta is not None and beta > 0 else None
    return MainTermReport(
        pi_f=res.pi_f,
        a_count=a_count,
        v_of_a=v,
        main_term=main,
        relative_error=rel,
        theorem_bound=bound,
        degenerate=False,
    )
