import numpy as np

from primebound.arith.primes import primes_upto
from primebound.constants import DEFAULT_CONFIG
from primebound.errors import BudgetExceededError, PreconditionError
from primebound.reporting.pool import chunk_range, map_ordered, resolve_workers

# Chunk length for range-sharded counting; bounds the size of one mask.
CHUNK = 2**22


def _sift_chunk(job):
    lo, hi, classes = job
    keep = np.ones(hi - lo, dtype=bool)
    for p, residues in classes:
        for r in residues:
            first = lo + (r - lo) % p
            keep[first - lo :: p] = False
    return int(np.count_nonzero(keep))


def _chunks(start, stop, workers):
    pieces = max(resolve_workers(workers), -(-(stop - start) // CHUNK))
    return chunk_range(start, stop, pieces)


def sift_count(start, X, system, budget=None, workers=1):
    """
    Count the integers n in [start, start + X) with n mod p outside Ω_p for
    every prime p of the system, by exhaustive marking.
    """
    budget = DEFAULT_CONFIG["sift_budget"] if budget is None else int(budget)
    if X < 0:
        raise PreconditionError("X must be non-negative, got {}".format(X))
    length = int(round(X))
    if length > budget:
        raise BudgetExceededError(
            "sifting {} integers exceeds the budget of {}".format(length, budget)
        )
    start = int(start)
    classes = system.items()
    jobs = [(lo, hi, classes) for lo, hi in _chunks(start, start + length, workers)]
    return sum(map_ordered(_sift_chunk, jobs, workers))


def _pi_l_chunk(job):
    primes, l, U = job
    q = np.asarray(primes, dtype=np.int64)
    keep = np.ones(len(q), dtype=bool)
    for r in U:
        # σ(q^(l-1)) = 1 + q + ... + q^(l-1), reduced mod r
        base = q % r
        power = np.ones(len(q), dtype=np.int64)
        total = np.zeros(len(q), dtype=np.int64)
        for _ in range(l):
            total = (total + power) % r
            power = (power * base) % r
        keep &= total != 0
    return int(np.count_nonzero(keep))


def empirical_pi_l(x, l, U, workers=1):
    """Number of primes q <= x such that no r in U divides (q^l - 1)/(q - 1)."""
    l = int(l)
    U = tuple(sorted(int(r) for r in U))
    for r in U:
        if r % l != 1:
            raise PreconditionError("{} in U is not 1 mod {}".format(r, l))
        if r >= 2**31:
            raise PreconditionError("members of U must be below 2**31, got {}".format(r))

    primes = primes_upto(int(x))
    pieces = max(1, min(resolve_workers(workers), len(primes)))
    jobs = [
        (primes[lo:hi].tolist(), l, U) for lo, hi in chunk_range(0, len(primes), pieces)
    ]
    return sum(map_ordered(_pi_l_chunk, jobs, workers))
