from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt, prod
from typing import TYPE_CHECKING

import sympy
from sympy.ntheory import pollard_rho

from primebound.arith.primes import prime_table
from primebound.constants import DEFAULT_CONFIG
from primebound.errors import PreconditionError

if TYPE_CHECKING:
    from primebound.sieve.basis import PrimeBasis

RHO_SEED = 1234
RHO_RETRIES = 20

_trial_division_bound = DEFAULT_CONFIG["trial_division_bound"]


def set_trial_division_bound(bound):
    global _trial_division_bound
    _trial_division_bound = max(2, int(bound))


@dataclass(frozen=True)
class Factorization:
    """
    Ordered (prime, exponent) pairs of a positive integer.

    The primes are strictly increasing and every exponent is at least 1, so
    the empty factorization is the one of 1.
    """

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        previous = 1
        for p, e in self.entries:
            if p <= previous:
                raise PreconditionError(
                    "primes must be strictly increasing, got {}".format(self.entries)
                )
            if e < 1:
                raise PreconditionError(
                    "exponents must be positive, got {}^{}".format(p, e)
                )
            previous = p

    @classmethod
    def from_dict(cls, factors):
        return cls(tuple(sorted((int(p), int(e)) for p, e in factors.items() if e)))

    @property
    def value(self):
        return prod(p**e for p, e in self.entries)

    @property
    def primes(self):
        return [p for p, _ in self.entries]

    @property
    def exponents(self):
        return [e for _, e in self.entries]

    def scaled(self, factor):
        """The factorization of value**factor."""
        return Factorization(tuple((p, e * factor) for p, e in self.entries))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        if not self.entries:
            return "1"
        return " * ".join(
            "{}".format(p) if e == 1 else "{}^{}".format(p, e) for p, e in self.entries
        )


@lru_cache(maxsize=8)
def _trial_primes(bound):
    return tuple(prime_table(bound).tolist())


def _trial_bound_for(n):
    # Round up to a power of two so the cache holds only a few prime lists.
    needed = min(isqrt(n) + 1, _trial_division_bound)
    return min(1 << max(needed, 2).bit_length(), _trial_division_bound)


def _split_cofactor(n, factors):
    """Factor a cofactor without small prime factors by Pollard rho."""
    if n == 1:
        return
    if sympy.isprime(n):
        factors[n] = factors.get(n, 0) + 1
        return

    divisor = pollard_rho(n, seed=RHO_SEED, retries=RHO_RETRIES)
    if divisor is None or divisor in (1, n):
        for p, e in sympy.factorint(n).items():
            factors[p] = factors.get(p, 0) + e
        return

    _split_cofactor(divisor, factors)
    _split_cofactor(n // divisor, factors)


def factorize(n):
    """
    Factor n >= 1.

    Trial division by sieved primes up to the configured bound, then Pollard
    rho on the remaining cofactor. Every prime of the result passes sympy's
    primality test (deterministic below 2**64, BPSW above).
    """
    n = int(n)
    if n < 1:
        raise PreconditionError("factorize requires n >= 1, got {}".format(n))

    factors = {}
    remaining = n
    for p in _trial_primes(_trial_bound_for(n)):
        if p * p > remaining:
            break
        if remaining % p == 0:
            e = 0
            while remaining % p == 0:
                remaining //= p
                e += 1
            factors[p] = e

    if remaining > 1:
        if remaining < _trial_division_bound**2 or sympy.isprime(remaining):
            # Trial division reached sqrt(remaining): it is prime.
            factors[remaining] = factors.get(remaining, 0) + 1
        else:
            _split_cofactor(remaining, factors)

    return Factorization.from_dict(factors)


def factorize_with_table(n, spf):
    """Factor n by repeated lookup in a smallest-prime-factor table covering n."""
    n = int(n)
    if not 1 <= n < len(spf):
        raise PreconditionError(
            "n={} is outside the smallest-prime-factor table".format(n)
        )
    factors = {}
    while n > 1:
        p = int(spf[n])
        n //= p
        factors[p] = factors.get(p, 0) + 1
    return Factorization.from_dict(factors)


def sigma_prime_power(p, e):
    return (p ** (e + 1) - 1) // (p - 1)


def sigma(f):
    """Sum of divisors of the integer with factorization f."""
    return prod(sigma_prime_power(p, e) for p, e in f)


def abundancy(f):
    """h(N) = σ(N)/N as a reduced fraction."""
    return Fraction(sigma(f), f.value)


def omega_counts(f, basis: PrimeBasis):
    """(ω, Ω, Ω_𝒫): distinct primes, primes with multiplicity, and those in the basis."""
    members = set(basis.primes)
    omega = len(f)
    big_omega = sum(e for _, e in f)
    big_omega_basis = sum(e for p, e in f if p in members)
    return omega, big_omega, big_omega_basis
