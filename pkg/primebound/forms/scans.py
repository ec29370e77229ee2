from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import numpy as np

from primebound.arith.primes import prime_table
from primebound.arith.sigma_table import sigma_segment
from primebound.constants import DEFAULT_CONFIG
from primebound.errors import AuditFailure, BudgetExceededError, PreconditionError
from primebound.forms.ledger import ScanLedger, segment_checksum
from primebound.reporting import console
from primebound.reporting.pool import map_ordered, resolve_workers

SCAN_MODES = ("odd_square", "full")

# Largest limit whose σ values and products stay inside int64.
INT64_SCAN_LIMIT = 10**18

SPOT_WINDOW = 2**14

_EMPTY_CHECKSUM = segment_checksum([])


@dataclass
class ScanResult:
    found: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def to_dict(self):
        return {"found": self.found, **self.stats}


def sigma_of_odd_squares(lo, hi):
    """
    (m, σ(m²)) for the odd m in [lo, hi), as two int64 arrays.

    Each m is split by the primes up to sqrt(hi); what is left over is 1 or
    a single prime q, contributing σ(q²) = 1 + q + q².
    """
    lo = max(int(lo), 1) | 1
    hi = int(hi)
    m = np.arange(lo, max(hi, lo), 2, dtype=np.int64)
    out = np.ones(len(m), dtype=np.int64)
    if not len(m):
        return m, out

    remaining = m.copy()
    for p in prime_table(isqrt(hi - 1)).tolist():
        if p == 2:
            continue
        first = ((lo + p - 1) // p) * p
        if first % 2 == 0:
            first += p
        if first >= hi:
            continue
        idx = np.arange((first - lo) // 2, len(m), p)
        sub = remaining[idx]
        exponent = np.zeros(len(idx), dtype=np.int64)
        while True:
            divisible = sub % p == 0
            if not divisible.any():
                break
            sub[divisible] //= p
            exponent[divisible] += 1
        remaining[idx] = sub

        # σ(p^(2e)) = 1 + p + ... + p^(2e), accumulated term by term
        total = np.ones(len(idx), dtype=np.int64)
        term = np.ones(len(idx), dtype=np.int64)
        for k in range(1, 2 * int(exponent.max()) + 1):
            active = 2 * exponent >= k
            term[active] *= p
            total[active] += term[active]
        out[idx] *= total

    q = remaining[remaining > 1]
    out[remaining > 1] *= 1 + q + q * q
    return m, out


def _quasiperfect_job(job):
    lo, hi, mode = job
    if mode == "odd_square":
        m, values = sigma_of_odd_squares(lo, hi)
        n = m * m
    else:
        values = sigma_segment(lo, hi)
        n = np.arange(lo, lo + len(values), dtype=np.int64)
    return (n[values == 2 * n + 1]).tolist()


def _multiperfect_job(job):
    lo, hi, num, den = job
    values = sigma_segment(lo, hi)
    n = np.arange(lo, lo + len(values), dtype=np.int64)
    return (n[values * den == n * num]).tolist()


def _run_segments(jobs, spans, func, workers, ledger, verify):
    """
    Run one job per segment in ordered batches and merge the hits.

    spans[i] is the [start, end) range of N that jobs[i] covers; it is the
    key of the ledger line. A segment already in the ledger with no hits is
    skipped unless verify is set; every other recorded segment is recomputed
    and checked against its checksum.
    """
    ledger = ledger or ScanLedger()
    found = []
    skipped = 0
    pending = []
    for job, span in zip(jobs, spans):
        if (
            not verify
            and ledger.completed(*span)
            and ledger.entries[span] == _EMPTY_CHECKSUM
        ):
            skipped += 1
            continue
        pending.append((job, span))

    batch = resolve_workers(workers)
    for i in range(0, len(pending), batch):
        chunk = pending[i : i + batch]
        results = map_ordered(func, [job for job, _ in chunk], workers)
        for (_, span), hits in zip(chunk, results):
            if ledger.completed(*span):
                ledger.verify(*span, hits)
            else:
                ledger.record(*span, hits)
            found.extend(hits)
        console.info(
            "segments {}/{} done, {} hits".format(
                min(i + batch, len(pending)), len(pending), len(found)
            )
        )
    return found, skipped


def _segment_bounds(start, stop, size):
    return [(lo, min(lo + size, stop)) for lo in range(start, stop, size)]


def _spot_check(limit, points, seed, found):
    """
    Compare the odd-square restriction against direct σ windows.

    Random windows of consecutive integers are evaluated with the divisor-pair
    segment kernel; every N there with σ(N) = 2N+1 must be an odd square already
    found, and σ of every odd square in the window must equal the value the
    odd-square kernel produced.
    """
    if points <= 0:
        return 0
    rng = np.random.default_rng(seed)
    width = min(SPOT_WINDOW, limit)
    windows = -(-points // width)
    known = set(found)
    checked = 0
    for _ in range(windows):
        lo = int(rng.integers(1, limit - width + 2))
        hi = lo + width
        values = sigma_segment(lo, hi)
        n = np.arange(lo, hi, dtype=np.int64)
        for hit in n[values == 2 * n + 1].tolist():
            root = isqrt(hit)
            if hit % 2 == 0 or root * root != hit or hit not in known:
                raise AuditFailure(
                    "spot-check found σ(N) = 2N+1 at N={} outside the "
                    "odd-square scan".format(hit)
                )

        first_root = isqrt(lo - 1) + 1
        last_root = isqrt(hi - 1)
        m, squares = sigma_of_odd_squares(first_root, last_root + 1)
        direct = values[m * m - lo]
        if not np.array_equal(direct, squares):
            bad = int(m[np.flatnonzero(direct != squares)[0]])
            raise AuditFailure(
                "σ({}²) disagrees between the odd-square and direct kernels".format(bad)
            )
        checked += width
    return checked


def quasiperfect_scan(
    limit,
    mode="odd_square",
    spot_checks=None,
    seed=None,
    segment_size=None,
    workers=1,
    ledger=None,
    verify=False,
    budget=None,
):
    """
    All N <= limit with σ(N) = 2N+1.

    By Cattaneo's theorem such N is an odd square, so the default mode only
    evaluates σ(m²) for odd m <= sqrt(limit). A full-range spot-check on
    random windows then cross-checks that restriction. mode="full" scans
    every N instead.
    """
    limit = int(limit)
    if limit < 1:
        raise PreconditionError("scan limit must be >= 1, got {}".format(limit))
    if limit > INT64_SCAN_LIMIT:
        raise PreconditionError(
            "scan limit {} exceeds the int64 range of the kernels".format(limit)
        )
    if mode not in SCAN_MODES:
        raise PreconditionError("unknown scan mode {!r}".format(mode))
    budget = DEFAULT_CONFIG["sigma_table_budget"] if budget is None else int(budget)
    segment_size = int(segment_size or DEFAULT_CONFIG["segment_size"])
    spot_checks = DEFAULT_CONFIG["spot_checks"] if spot_checks is None else int(spot_checks)
    seed = DEFAULT_CONFIG["seed"] if seed is None else int(seed)

    if mode == "odd_square":
        roots = isqrt(limit)
        points = (roots + 1) // 2
        bounds = _segment_bounds(1, roots + 1, segment_size)
        spans = [(lo * lo, hi * hi) for lo, hi in bounds]
    else:
        points = limit
        bounds = _segment_bounds(1, limit + 1, segment_size)
        spans = bounds
    if points > budget:
        raise BudgetExceededError(
            "quasiperfect scan evaluates {} points, over the budget of {}".format(
                points, budget
            )
        )

    console.info("quasiperfect scan up to {} ({} mode)".format(limit, mode))
    jobs = [(lo, hi, mode) for lo, hi in bounds]
    found, skipped = _run_segments(jobs, spans, _quasiperfect_job, workers, ledger, verify)
    found.sort()

    spot = 0
    if mode == "odd_square":
        spot = _spot_check(limit, spot_checks, seed, found)

    return ScanResult(
        found=found,
        stats={
            "limit": limit,
            "mode": mode,
            "points": points,
            "segments": len(bounds),
            "skipped_segments": skipped,
            "spot_checked": spot,
            "seed": seed,
        },
    )


def multiperfect_scan(
    limit,
    target,
    segment_size=None,
    workers=1,
    ledger=None,
    verify=False,
    budget=None,
):
    """All N <= limit with σ(N)/N equal to the rational target > 1."""
    limit = int(limit)
    target = Fraction(target)
    if limit < 1:
        raise PreconditionError("scan limit must be >= 1, got {}".format(limit))
    if target <= 1:
        raise PreconditionError("target abundancy must exceed 1, got {}".format(target))
    # σ(N) < 16 N far beyond any feasible limit
    if 16 * limit * max(target.numerator, target.denominator) >= 2**63:
        raise PreconditionError(
            "limit {} with target {} overflows the int64 comparison".format(limit, target)
        )
    budget = DEFAULT_CONFIG["sigma_table_budget"] if budget is None else int(budget)
    if limit > budget:
        raise BudgetExceededError(
            "multiperfect scan up to {} exceeds the budget of {}".format(limit, budget)
        )
    segment_size = int(segment_size or DEFAULT_CONFIG["segment_size"])

    console.info("multiperfect scan up to {} for h(N) = {}".format(limit, target))
    bounds = _segment_bounds(1, limit + 1, segment_size)
    jobs = [(lo, hi, target.numerator, target.denominator) for lo, hi in bounds]
    found, skipped = _run_segments(jobs, bounds, _multiperfect_job, workers, ledger, verify)

    return ScanResult(
        found=found,
        stats={
            "limit": limit,
            "target": str(target),
            "segments": len(bounds),
            "skipped_segments": skipped,
        },
    )
