from math import isqrt

import numpy as np

from primebound.arith.factorization import factorize_with_table
from primebound.arith.primes import smallest_prime_factor_table
from primebound.arith.sigma_table import sigma_table
from primebound.bounds.theorem4 import C_one
from primebound.constants import DEFAULT_CONFIG
from primebound.errors import BudgetExceededError, PreconditionError
from primebound.forms.predicates import kishore_check, theorem4_hypothesis_check
from primebound.forms.scans import sigma_of_odd_squares
from primebound.reporting import console

# σ(m)σ(n) and (m+n)² stay inside int64 up to here.
KISHORE_MAX_LIMIT = 10**8


def squarefree_kernels(values, spf):
    """Squarefree kernel of every entry of values, using an spf table covering them."""
    remaining = np.asarray(values, dtype=np.int64).copy()
    kernel = np.ones(len(remaining), dtype=np.int64)
    while True:
        active = np.flatnonzero(remaining > 1)
        if not len(active):
            return kernel
        p = spf[remaining[active]]
        remaining[active] //= p
        # primes arrive in non-decreasing order, so p | kernel iff p is toggled on
        on = kernel[active] % p == 0
        kernel[active] = np.where(on, kernel[active] // p, kernel[active] * p)


def kishore_search(limit, budget=None):
    """
    Every coprime pair m even, n odd, m, n <= limit with σ(m)σ(n) = (m+n)².

    m+n is odd, so σ(m) and σ(n) are both odd: n is a square and m a square
    or twice a square. The product must also be a square, so only pairs with
    equal squarefree kernels of σ are compared.
    """
    limit = int(limit)
    if limit < 1:
        raise PreconditionError("search limit must be >= 1, got {}".format(limit))
    if limit > KISHORE_MAX_LIMIT:
        raise PreconditionError(
            "search limit {} overflows the int64 comparison".format(limit)
        )
    table = sigma_table(limit, budget=budget)
    sig = table.values

    numbers = np.arange(limit + 1, dtype=np.int64)
    odd_sigma = (sig % 2 == 1) & (numbers >= 1)
    evens = numbers[odd_sigma & (numbers % 2 == 0)]
    odds = numbers[odd_sigma & (numbers % 2 == 1)]
    console.info(
        "kishore search up to {}: {} even and {} odd candidates".format(
            limit, len(evens), len(odds)
        )
    )
    if not len(evens) or not len(odds):
        return {
            "limit": limit,
            "candidates": [len(evens), len(odds)],
            "pairs_compared": 0,
            "found": [],
        }

    spf = smallest_prime_factor_table(int(max(sig[evens].max(), sig[odds].max())))
    even_kernels = squarefree_kernels(sig[evens], spf)
    odd_kernels = squarefree_kernels(sig[odds], spf)

    found = []
    compared = 0
    for kernel in np.intersect1d(even_kernels, odd_kernels).tolist():
        m = evens[even_kernels == kernel]
        n = odds[odd_kernels == kernel]
        lhs = sig[m][:, None] * sig[n][None, :]
        rhs = (m[:, None] + n[None, :]) ** 2
        hits = (lhs == rhs) & (np.gcd(m[:, None], n[None, :]) == 1)
        compared += lhs.size
        for i, j in zip(*np.nonzero(hits)):
            found.append(kishore_check(int(m[i]), int(n[j])).to_dict())

    found.sort(key=lambda report: (report["m"], report["n"]))
    return {
        "limit": limit,
        "candidates": [len(evens), len(odds)],
        "pairs_compared": compared,
        "found": found,
    }


def theorem4_sweep(limit, basis, budget=None):
    """
    Run theorem4_hypothesis_check on every odd square N <= limit with
    σ(N) >= 2N and compare the smallest prime factor of each passing N with C1.
    """
    limit = int(limit)
    if limit < 1:
        raise PreconditionError("sweep limit must be >= 1, got {}".format(limit))
    roots = isqrt(limit)
    budget = DEFAULT_CONFIG["sigma_table_budget"] if budget is None else int(budget)
    if roots > budget:
        raise BudgetExceededError(
            "theorem-4 sweep needs {} roots, over the budget of {}".format(roots, budget)
        )

    m, values = sigma_of_odd_squares(1, roots + 1)
    abundant = m[values >= 2 * m * m].tolist()
    spf = smallest_prime_factor_table(max(roots, 2))

    passing = []
    for root in abundant:
        f = factorize_with_table(root, spf).scaled(2)
        report = theorem4_hypothesis_check(f, basis)
        if report.all_hold:
            passing.append(report.to_dict())

    return {
        "limit": limit,
        "basis": str(basis),
        "odd_squares": len(m),
        "abundant": len(abundant),
        "passing": passing,
        "C1": C_one(basis).to_dict(),
        "ok": all(entry["spf_below_C1"] for entry in passing),
    }
