import random
from fractions import Fraction
from math import gcd, prod

import pytest

from primebound.arith.factorization import (
    Factorization,
    abundancy,
    factorize,
    factorize_with_table,
    omega_counts,
    sigma,
)
from primebound.arith.primes import (
    enumerate_primes,
    primes_in_segment,
    primes_upto,
    smallest_prime_factor_table,
)
from primebound.arith.sigma_table import sigma_segment, sigma_table
from primebound.errors import BudgetExceededError, PreconditionError
from primebound.sieve.basis import PrimeBasis


def divisor_sum(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


@pytest.mark.parametrize(
    "n, expected",
    [
        (1, []),
        (120, [(2, 3), (3, 1), (5, 1)]),
        (523776, [(2, 9), (3, 1), (11, 1), (31, 1)]),
        (9973, [(9973, 1)]),
    ],
)
def test_factorize_examples(n, expected):
    assert list(factorize(n)) == expected


def test_factorize_large_cofactor():
    # Two primes above the trial-division bound.
    p, q = 1000000007, 998244353
    assert list(factorize(p * q)) == [(q, 1), (p, 1)]
    assert list(factorize(2**5 * p**2)) == [(2, 5), (p, 2)]


def test_factorize_rejects_zero():
    with pytest.raises(PreconditionError):
        factorize(0)


def test_factorization_round_trip():
    rng = random.Random(7)
    for _ in range(2000):
        n = rng.randint(1, 10**6)
        f = factorize(n)
        assert f.value == n
        assert prod(p**e for p, e in f) == n
        assert f.primes == sorted(set(f.primes))


def test_factorization_validates_entries():
    with pytest.raises(PreconditionError):
        Factorization(((3, 1), (2, 1)))
    with pytest.raises(PreconditionError):
        Factorization(((2, 0),))


@pytest.mark.parametrize("n, expected", [(1, 1), (28, 56), (120, 360)])
def test_sigma_examples(n, expected):
    assert sigma(factorize(n)) == expected


def test_sigma_multiplicative():
    rng = random.Random(11)
    checked = 0
    while checked < 500:
        a, b = rng.randint(1, 10**6), rng.randint(1, 10**6)
        if gcd(a, b) != 1:
            continue
        assert sigma(factorize(a * b)) == sigma(factorize(a)) * sigma(factorize(b))
        checked += 1


@pytest.mark.parametrize(
    "n, expected", [(6, Fraction(2)), (120, Fraction(3)), (10, Fraction(9, 5))]
)
def test_abundancy(n, expected):
    assert abundancy(factorize(n)) == expected


@pytest.mark.parametrize(
    "n, primes, expected",
    [(12, "3", (2, 3, 1)), (1, "3,5", (0, 0, 0)), (45, "3,5", (2, 3, 3))],
)
def test_omega_counts(n, primes, expected):
    assert omega_counts(factorize(n), PrimeBasis.parse(primes)) == expected


def test_enumerate_primes_examples():
    assert list(enumerate_primes(30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert list(enumerate_primes(50, (4, 1))) == [5, 13, 17, 29, 37, 41]
    assert list(enumerate_primes(40, (15, 1))) == [31]
    assert list(enumerate_primes(1)) == []


def test_enumerate_primes_rejects_non_coprime_class():
    with pytest.raises(PreconditionError):
        enumerate_primes(100, (6, 3))


def test_enumerate_primes_small_segments_match_table():
    assert list(enumerate_primes(10**5, segment_size=997)) == primes_upto(10**5).tolist()


def test_progressions_partition_primes():
    x = 5000
    everything = set(enumerate_primes(x))
    for k in range(1, 31):
        union = {p for p in everything if k % p == 0}
        for a in range(k):
            if gcd(a, k) == 1:
                union |= set(enumerate_primes(x, (k, a)))
        assert union == everything, k


def test_primes_in_segment():
    assert primes_in_segment(90, 110).tolist() == [97, 101, 103, 107, 109]
    assert primes_in_segment(0, 3).tolist() == [2]


def test_smallest_prime_factor_table():
    spf = smallest_prime_factor_table(100)
    assert spf[97] == 97
    assert spf[91] == 7
    assert spf[64] == 2
    assert spf[1] == 0


def test_sigma_table_examples():
    table = sigma_table(10**4)
    assert table.values[1:11].tolist() == [1, 3, 4, 7, 6, 12, 8, 15, 13, 18]
    assert table[9973] == 9974
    assert table[36] == 91
    with pytest.raises(PreconditionError):
        table[0]


def test_sigma_table_matches_pointwise():
    table = sigma_table(10**5, segment_size=4096)
    for n in range(1, 10**5 + 1, 7):
        assert table[n] == sigma(factorize(n)), n


def test_sigma_segment_matches_brute_force():
    segment = sigma_segment(1000, 1200)
    assert segment.tolist() == [divisor_sum(n) for n in range(1000, 1200)]


def test_sigma_table_budget():
    with pytest.raises(BudgetExceededError):
        sigma_table(1000, budget=999)


def test_factorize_with_table_matches_factorize():
    spf = smallest_prime_factor_table(5000)
    for n in range(1, 5001):
        assert factorize_with_table(n, spf) == factorize(n), n
    with pytest.raises(PreconditionError):
        factorize_with_table(5001, spf)
