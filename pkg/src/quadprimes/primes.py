"""Prime utilities: cached Eratosthenes sieve, deterministic Miller-Rabin,
trial-division factorization and modular square roots (Tonelli-Shanks)."""

from __future__ import annotations

from math import isqrt

from .errors import FactorizationOverflow

# Deterministic witness set for n < 3.3e24 (Sorenson-Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_sieve_limit = 0
_sieve_primes: list[int] = []

# factorize() refuses to trial divide past this point
TRIAL_DIVISION_LIMIT = 10**6


def primes_upto(n: int) -> list[int]:
    """All primes <= n, from a cached sieve that grows geometrically."""
    global _sieve_limit, _sieve_primes
    if n > _sieve_limit:
        limit = max(n, 2 * _sieve_limit, 1 << 10)
        flags = bytearray([1]) * (limit + 1)
        flags[0] = flags[1] = 0
        for p in range(2, isqrt(limit) + 1):
            if flags[p]:
                flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
        _sieve_primes = [i for i, f in enumerate(flags) if f]
        _sieve_limit = limit
    if n == _sieve_limit:
        return _sieve_primes
    from bisect import bisect_right

    return _sieve_primes[: bisect_right(_sieve_primes, n)]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as [(p, e), ...] with p increasing.

    Trial division by primes up to TRIAL_DIVISION_LIMIT, then a deterministic
    primality check on the cofactor; a composite cofactor out of trial range
    raises FactorizationOverflow.
    """
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out: list[tuple[int, int]] = []
    rem = n
    if rem >= 2:
        for p in primes_upto(min(isqrt(rem), TRIAL_DIVISION_LIMIT)):
            if p * p > rem:
                break
            if rem % p == 0:
                e = 0
                while rem % p == 0:
                    rem //= p
                    e += 1
                out.append((p, e))
    if rem > 1:
        if rem <= TRIAL_DIVISION_LIMIT * TRIAL_DIVISION_LIMIT or is_prime(rem):
            out.append((rem, 1))
        else:
            raise FactorizationOverflow(f"composite cofactor {rem} exceeds trial division range")
    return out


def sqrt_mod_prime(n: int, p: int) -> int | None:
    """A square root of n modulo an odd prime p, or None if n is a non-residue.

    Tonelli-Shanks; the p % 4 == 3 shortcut avoids the iteration entirely.
    """
    n %= p
    if n == 0:
        return 0
    if pow(n, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r
