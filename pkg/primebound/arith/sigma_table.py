from dataclasses import dataclass
from math import isqrt

import numpy as np

from primebound.constants import DEFAULT_CONFIG
from primebound.errors import BudgetExceededError, PreconditionError
from primebound.reporting.pool import map_ordered, resolve_workers


@dataclass(frozen=True)
class SigmaTable:
    """Dense table with values[n] = σ(n) for 1 <= n <= limit (values[0] = 0)."""

    limit: int
    values: np.ndarray

    def __getitem__(self, n):
        if not 1 <= n <= self.limit:
            raise PreconditionError(
                "σ table covers 1..{}, got n={}".format(self.limit, n)
            )
        return int(self.values[n])

    def __len__(self):
        return self.limit


def sigma_segment(lo, hi):
    """
    σ(n) for every n in [lo, hi), as an int64 array indexed from lo.

    Each divisor pair (d, m/d) with d <= sqrt(m) is added once at m, so the
    loop runs only up to sqrt(hi) and never needs the values outside the
    segment.
    """
    lo = max(int(lo), 1)
    hi = int(hi)
    if hi <= lo:
        return np.zeros(0, dtype=np.int64)

    out = np.zeros(hi - lo, dtype=np.int64)
    for d in range(1, isqrt(hi - 1) + 1):
        first = max(d * d, ((lo + d - 1) // d) * d)
        if first >= hi:
            continue
        multiples = np.arange(first, hi, d, dtype=np.int64)
        out[multiples - lo] += d + multiples // d
        if first == d * d:
            # d is its own cofactor at m = d²
            out[first - lo] -= d
    return out


def _segment_job(bounds):
    return sigma_segment(*bounds)


def sigma_segments(start, stop, segment_size=None, workers=1):
    """
    Yield (lo, values) for consecutive segments covering [start, stop).

    Segments are computed in batches of `workers` and yielded in order, so the
    output does not depend on how the pool schedules them.
    """
    segment_size = int(segment_size or DEFAULT_CONFIG["segment_size"])
    start = max(int(start), 1)
    bounds = [
        (lo, min(lo + segment_size, stop)) for lo in range(start, stop, segment_size)
    ]
    batch = resolve_workers(workers)
    for i in range(0, len(bounds), batch):
        chunk = bounds[i : i + batch]
        for (lo, _), values in zip(chunk, map_ordered(_segment_job, chunk, workers)):
            yield lo, values


def sigma_table(limit, budget=None, segment_size=None, workers=1):
    """Dense σ table up to limit, filled segment by segment."""
    limit = int(limit)
    budget = DEFAULT_CONFIG["sigma_table_budget"] if budget is None else int(budget)
    if limit < 1:
        raise PreconditionError("σ table needs limit >= 1, got {}".format(limit))
    if limit > budget:
        raise BudgetExceededError(
            "σ table up to {} exceeds the budget of {}; "
            "use the segmented scan instead".format(limit, budget)
        )

    values = np.zeros(limit + 1, dtype=np.int64)
    for lo, segment in sigma_segments(1, limit + 1, segment_size, workers):
        values[lo : lo + len(segment)] = segment
    values.setflags(write=False)
    return SigmaTable(limit=limit, values=values)
