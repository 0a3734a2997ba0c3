import math
import random
from fractions import Fraction

import pytest

from quadprimes.analytic import (
    buchstab,
    delta_sum,
    main_term_report,
    v_product,
    w_product,
)
from quadprimes.character import kronecker
from quadprimes.errors import BudgetExceeded
from quadprimes.polynomial import roots_mod_prime, validate
from quadprimes.sieve import sieve_pi

from oracles import SMALL_PRIMES, rand_admissible


def _fraction_v(f, z):
    out = Fraction(1)
    for p in SMALL_PRIMES:
        if p >= z:
            break
        out *= Fraction(p - len(roots_mod_prime(f, p).roots), p)
    return out


def test_v_product_golden_and_empty():
    f = validate(1, 0, 1)
    assert v_product(f, 2) == 1.0
    assert v_product(f, 10) == pytest.approx(0.3, abs=0)  # (1/2)*(3/5) exactly
    euler = validate(1, 1, 41)
    assert v_product(euler, 16) == 1.0  # rho vanishes below 16 for delta=-163


def test_v_product_matches_fraction_reference():
    rng = random.Random(20)
    for _ in range(25):
        f = validate(*rand_admissible(rng, 10))
        z = rng.uniform(2, 300)
        want = _fraction_v(f, z)
        got = v_product(f, z)
        assert got == pytest.approx(float(want), rel=1e-15), (f, z)


def test_v_product_budget():
    f = validate(1, 0, 1)
    with pytest.raises(BudgetExceeded):
        v_product(f, 10**8, prime_budget=10**6)
    with pytest.raises(ValueError):
        v_product(f, 1.5)


def test_w_product_matches_fraction_reference():
    rng = random.Random(21)
    for delta in (-163, -4, -3, 5, 8, 40):
        for _ in range(8):
            u = rng.uniform(2, 400)
            want = Fraction(1)
            for p in SMALL_PRIMES:
                if p >= u:
                    break
                want *= Fraction(p - 1, p) * Fraction(p - kronecker(delta, p), p)
            assert w_product(delta, u) == pytest.approx(float(want), rel=1e-15)
    assert w_product(-4, 10) == pytest.approx(0.5 * (8 / 9) * (16 / 25) * (48 / 49),
                                              rel=1e-15)


def test_delta_sum_matches_direct_sum():
    rng = random.Random(22)
    for delta in (-163, -4, 5, 21):
        for _ in range(10):
            x = rng.uniform(2, 50)
            a_count = rng.randint(2, 500)
            want = math.fsum(
                (1 + kronecker(delta, p)) / p
                for p in SMALL_PRIMES
                if x <= p <= a_count
            )
            assert delta_sum(delta, x, a_count) == pytest.approx(want, abs=1e-15)
    assert delta_sum(-4, 100, 50) == 0.0  # empty range


def test_v_product_non_increasing_in_z():
    rng = random.Random(24)
    for _ in range(10):
        f = validate(*rand_admissible(rng, 8))
        prev = 1.0
        for z in (2, 3, 5, 10, 30, 100, 300):
            cur = v_product(f, z)
            assert 0 < cur <= prev, (f, z)
            prev = cur


def test_w_product_positive_and_non_increasing():
    for delta in (-163, -4, 5, 40):
        prev = 1.0
        for u in (2, 3, 5, 10, 50, 200, 1000):
            cur = w_product(delta, u)
            assert 0 < cur <= prev, (delta, u)
            prev = cur


def test_delta_sum_non_negative_and_non_increasing_in_x():
    from quadprimes.character import lambda_

    for delta in (-163, -4, 5):
        prev = None
        for x in (2, 3, 5, 10, 40, 90):
            cur = delta_sum(delta, x, 100)
            assert cur >= 0
            if prev is not None:
                assert cur <= prev + 1e-15, (delta, x)
            prev = cur
    # lambda at primes agrees with the divisor-enumeration route
    want = math.fsum(
        lambda_(-163, p) / p for p in SMALL_PRIMES if 3 <= p <= 100
    )
    assert delta_sum(-163, 3, 100) == pytest.approx(want, abs=1e-15)


def test_delta_sum_validation():
    with pytest.raises(ValueError):
        delta_sum(-4, 1.0, 100)
    with pytest.raises(ValueError):
        delta_sum(-4, 2.0, 0)
    with pytest.raises(BudgetExceeded):
        delta_sum(-4, 2.0, 10**9, prime_budget=10**6)


def test_buchstab_identity_golden():
    f = validate(1, 0, 1)
    rep = buchstab(f, 10**4, 5.0)
    assert rep.identity_residual == 0
    assert rep.s_a_z == 99  # even n survive sifting by {2, 3}
    assert rep.s1 + rep.s2 + rep.s3 == rep.s_a_z - rep.s_a_sqrt_n
    assert rep.s1 == 40  # only p = 5 sits below A/z^2 = 7.96
    assert rep.s3 == 0
    assert dict(rep.per_prime)[5] == 40


def test_buchstab_residual_zero_on_randoms():
    rng = random.Random(23)
    for _ in range(80):
        f = validate(*rand_admissible(rng, 10))
        n_value = rng.randint(100, 50000)
        z = rng.uniform(2, math.sqrt(n_value))
        flag = rng.random() < 0.5
        rep = buchstab(f, n_value, z, include_sqrt_n=flag)
        assert rep.identity_residual == 0, (f, n_value, z, flag)
        assert rep.s1 >= 0 and rep.s2 >= 0 and rep.s3 >= 0


def test_buchstab_endpoint_convention_switches_both_sides():
    # N = 49 puts sqrt(N) = 7 exactly on a prime; f = x^2+x+1 has rho(7) = 2
    f = validate(1, 1, 1)
    strict = buchstab(f, 49, 3.0)
    closed = buchstab(f, 49, 3.0, include_sqrt_n=True)
    assert strict.identity_residual == 0
    assert closed.identity_residual == 0
    strict_ps = [p for p, _ in strict.per_prime]
    closed_ps = [p for p, _ in closed.per_prime]
    assert 7 not in strict_ps and 7 in closed_ps
    lpf7 = dict(closed.per_prime)[7]
    assert lpf7 > 0
    assert strict.s_a_sqrt_n - closed.s_a_sqrt_n == lpf7
    assert strict.s_a_z == closed.s_a_z


def test_buchstab_z_validation():
    f = validate(1, 0, 1)
    with pytest.raises(ValueError):
        buchstab(f, 100, 11.0)  # z^2 > N
    with pytest.raises(ValueError):
        buchstab(f, 100, 1.0)


def test_main_term_golden_euler():
    f = validate(1, 1, 41)
    rep = main_term_report(f, 100)
    assert rep.pi_f == 16
    assert rep.a_count == 16
    assert rep.v_of_a == 1.0
    assert rep.main_term == 16.0
    assert rep.relative_error == 0.0
    assert not rep.degenerate
    assert rep.theorem_bound is None  # no beta supplied


def test_main_term_theorem_bound():
    f = validate(1, 1, 41)
    rep = main_term_report(f, 100, beta=4.0)
    assert rep.theorem_bound == pytest.approx(math.exp(-2 / 6), rel=1e-15)
    rep_neg = main_term_report(f, 100, beta=-0.5)
    assert rep_neg.theorem_bound is None


def test_main_term_empty_domain_flagged():
    f = validate(-1, 0, -5)
    rep = main_term_report(f, 100)
    assert rep.degenerate
    assert rep.main_term == 0.0
    assert rep.relative_error is None


def test_main_term_reuses_sieve_result():
    f = validate(1, 0, 1)
    res = sieve_pi(f, 10**4)
    rep = main_term_report(f, 10**4, res)
    assert rep.pi_f == res.pi_f == 38
    assert rep.a_count == 199
    assert rep.main_term == pytest.approx(199 * v_product(f, 199), rel=1e-15)
    assert rep.relative_error == pytest.approx(
        (38 - rep.main_term) / rep.main_term, rel=1e-15
    )
