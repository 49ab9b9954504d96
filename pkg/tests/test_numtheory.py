"""Oracle tests for factorization, omega, and the two analytic bounds."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regcycles import numtheory as nt


def sieve_omega(limit):
    """Independent oracle: omega(n) for all n < limit by a sieve."""
    w = [0] * limit
    for p in range(2, limit):
        if w[p] == 0:  # p prime: no smaller prime divided it
            for k in range(p, limit, p):
                w[k] += 1
    return w


class TestFactorize:
    def test_one_is_empty_product(self):
        assert nt.factorize(1).pairs == ()

    def test_twelve(self):
        assert nt.factorize(12).pairs == ((2, 2), (3, 1))

    def test_sixty_three(self):
        # 2**6 - 1 = 63 = 3**2 * 7
        assert nt.factorize(63).pairs == ((3, 2), (7, 1))

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            nt.factorize(0)

    def test_rejects_over_cap(self):
        with pytest.raises(OverflowError):
            nt.factorize(nt.FACTOR_CAP + 1)

    def test_large_semiprime(self):
        p, q = 1000003, 1000033
        assert nt.factorize(p * q).pairs == ((p, 1), (q, 1))

    @given(st.integers(min_value=1, max_value=10**12))
    @settings(max_examples=200, deadline=None)
    def test_reconstruction(self, n):
        f = nt.factorize(n)
        assert f.value == n
        primes = f.primes()
        assert list(primes) == sorted(primes)
        assert len(set(primes)) == len(primes)


class TestOmega:
    def test_small_values(self):
        assert nt.omega(1) == 0
        assert nt.omega(26) == 2
        assert nt.omega(210) == 4  # 2*3*5*7

    def test_against_sieve(self):
        w = sieve_omega(3000)
        for n in range(1, 3000):
            assert nt.omega(n) == w[n]


class TestRobinBound:
    def test_rejects_below_26(self):
        with pytest.raises(ValueError):
            nt.robin_bound(25)

    def test_at_26(self):
        assert nt.robin_bound(26) > 2

    def test_720720(self):
        # omega(720720) = 6 (2,3,5,7,11,13)
        assert nt.omega(720720) == 6
        assert nt.robin_bound(720720) >= 6

    def test_sweep_to_million(self):
        # omega(n) <= log n / (log log n - 1.1714) for all 26 <= n < 10**6
        w = sieve_omega(10**6)
        for n in range(26, 10**6):
            assert w[n] <= math.log(n) / (math.log(math.log(n)) - 1.1714)


class TestPrimitivePrimeDivisors:
    def test_known_counts(self):
        assert nt.primitive_prime_divisor_count(4, 2) == 1   # 15 -> {5}
        assert nt.primitive_prime_divisor_count(3, 2) == 0   # 8: 2 | 3-1
        # 2**6 - 1 = 63 = 3**2 * 7 with 3 | 2**2-1 and 7 | 2**3-1: the
        # classical exceptional case with no primitive prime divisor at all.
        assert nt.primitive_prime_divisor_count(2, 6) == 0
        assert nt.primitive_prime_divisor_count(4, 3) == 1   # 63 -> {7}

    @given(st.integers(min_value=2, max_value=16),
           st.integers(min_value=1, max_value=12))
    @settings(max_examples=150, deadline=None)
    def test_flagged_primes_definition(self, t, ell):
        count = nt.primitive_prime_divisor_count(t, ell)
        assert count <= nt.omega(t**ell - 1) if t**ell > 2 else count == 0
        # recompute from the definition, prime by prime
        expected = 0
        for r in nt.factorize(t**ell - 1).primes():
            if all((t**i - 1) % r for i in range(1, ell)):
                expected += 1
        assert count == expected


class TestWeightedGeometricSum:
    def test_exact_values(self):
        assert nt.weighted_geometric_sum(2) == 2
        assert nt.weighted_geometric_sum(3) == Fraction(3, 4)

    def test_identity(self):
        for q in range(2, 40):
            assert nt.weighted_geometric_sum(q) * (q - 1) ** 2 == q

    def test_partial_sum_oracle(self):
        partial = sum(Fraction(ell, 2**ell) for ell in range(61))
        assert abs(nt.weighted_geometric_sum(2) - partial) < Fraction(1, 2**50)
