from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from primebound.errors import PreconditionError

DEFAULT_SEGMENT = 2**20


def _sieve_mask(limit):
    """Boolean mask of length limit+1 with mask[n] == n is prime."""
    mask = np.ones(limit + 1, dtype=bool)
    mask[: min(2, limit + 1)] = False
    for p in range(2, isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask


@lru_cache(maxsize=16)
def prime_table(limit):
    """
    All primes p <= limit as a read-only int64 array.

    Cached: repeated calls with the same limit share one immutable table,
    which is safe to read from several workers.
    """
    limit = int(limit)
    if limit < 2:
        primes = np.zeros(0, dtype=np.int64)
    else:
        primes = np.flatnonzero(_sieve_mask(limit)).astype(np.int64)
    primes.setflags(write=False)
    return primes


def primes_in_segment(lo, hi, base_primes=None):
    """Primes in the half-open segment [lo, hi), by a segmented sieve."""
    lo = max(int(lo), 2)
    hi = int(hi)
    if hi <= lo:
        return np.zeros(0, dtype=np.int64)
    if base_primes is None:
        base_primes = prime_table(isqrt(hi - 1))

    mask = np.ones(hi - lo, dtype=bool)
    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        first = max(p * p, ((lo + p - 1) // p) * p)
        mask[first - lo :: p] = False
    return np.flatnonzero(mask).astype(np.int64) + lo


def check_progression(k, a):
    """Validate and normalise a residue class a mod k with gcd(a, k) = 1."""
    k = int(k)
    a = int(a)
    if k < 1:
        raise PreconditionError("modulus must be positive, got k={}".format(k))
    if gcd(a, k) != 1:
        raise PreconditionError(
            "residue class {} mod {} is not coprime to the modulus".format(a, k)
        )
    return k, a % k


def enumerate_primes(limit, progression=None, segment_size=DEFAULT_SEGMENT):
    """
    Stream the primes p <= limit in ascending order, optionally restricted to
    p ≡ a (mod k) for progression = (k, a).

    The range is sieved in fixed-size segments so memory stays bounded.
    """
    if progression is not None:
        progression = check_progression(*progression)
    return _stream_primes(int(limit), progression, segment_size)


def _stream_primes(limit, progression, segment_size):
    if limit < 2:
        return
    if progression is not None:
        k, a = progression

    base_primes = prime_table(isqrt(limit))
    lo = 2
    while lo <= limit:
        hi = min(lo + segment_size, limit + 1)
        segment = primes_in_segment(lo, hi, base_primes)
        if progression is not None:
            segment = segment[segment % k == a]
        for p in segment.tolist():
            yield p
        lo = hi


def primes_upto(limit, progression=None):
    """Primes p <= limit (in the progression, if given) as an int64 array."""
    primes = prime_table(int(limit))
    if progression is None:
        return primes
    k, a = check_progression(*progression)
    return primes[primes % k == a]


@lru_cache(maxsize=4)
def smallest_prime_factor_table(limit):
    """spf[n] = smallest prime factor of n for 2 <= n <= limit (spf[0] = spf[1] = 0)."""
    limit = int(limit)
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in prime_table(isqrt(limit)).tolist():
        block = spf[p * p :: p]
        block[block == 0] = p
    unset = spf == 0
    unset[:2] = False
    spf[unset] = np.flatnonzero(unset)
    spf.setflags(write=False)
    return spf
