import math
from dataclasses import dataclass, field

import numpy as np
from sympy import totient

from primebound.arith.primes import primes_upto
from primebound.constants import AUDIT_MAX_MODULUS, DEFAULT_CONFIG, EULER_GAMMA
from primebound.errors import BudgetExceededError, PreconditionError
from primebound.reporting import console
from primebound.reporting.pool import map_ordered


@dataclass
class CheckResult:
    """One audited inequality lhs < rhs over all its sample points."""

    name: str
    samples: int = 0
    failures: list = field(default_factory=list)
    worst_margin: float = math.inf
    worst_at: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.failures

    def record(self, lhs, rhs, strict=True, **where):
        self.samples += 1
        margin = (rhs - lhs) / abs(rhs)
        if margin < self.worst_margin:
            self.worst_margin = margin
            self.worst_at = {**where, "lhs": lhs, "rhs": rhs}
        ok = lhs < rhs if strict else lhs <= rhs
        if not ok:
            self.failures.append({**where, "lhs": lhs, "rhs": rhs})

    def merge(self, other):
        self.samples += other.samples
        self.failures.extend(other.failures)
        if other.worst_margin < self.worst_margin:
            self.worst_margin = other.worst_margin
            self.worst_at = other.worst_at

    def to_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "samples": self.samples,
            "worst_margin": self.worst_margin if self.samples else None,
            "worst_at": self.worst_at,
            "failures": self.failures,
        }


@dataclass
class AuditReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def to_dict(self):
        return {
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
        }


def sample_grid(z):
    """{2^j} ∪ {10^j} ∪ {z} intersected with [2, z], ascending."""
    points = {z}
    t = 2
    while t <= z:
        points.add(t)
        t *= 2
    t = 10
    while t <= z:
        points.add(t)
        t *= 10
    return sorted(points)


def _mertens_checks(primes, grid):
    """Σ_{p<=t} log p/p < log t and ∏_{p<t}(1 - 1/p) < e^{-γ}(1 + 1/(2log²t))/log t."""
    p = primes.astype(np.float64)
    log_sums = np.cumsum(np.log(p) / p)
    log_products = np.cumsum(np.log1p(-1 / p))

    log_sum = CheckResult("sum_logp_over_p_below_log")
    product = CheckResult("mertens_product_upper")
    for t in grid:
        log_t = math.log(t)
        upto = int(np.searchsorted(primes, t, side="right"))
        below = int(np.searchsorted(primes, t, side="left"))
        lhs = float(log_sums[upto - 1]) if upto else 0.0
        log_sum.record(lhs, log_t, t=t)

        lhs = math.exp(float(log_products[below - 1])) if below else 1.0
        rhs = math.exp(-EULER_GAMMA) * (1 + 1 / (2 * log_t**2)) / log_t
        product.record(lhs, rhs, t=t)
    return [log_sum, product]


def _brun_titchmarsh_job(job):
    """π(t; k, a) <= 2t/(φ(k) log(t/k)) for every a coprime to k, t > 2k on the grid."""
    k, grid, limit = job
    primes = primes_upto(limit)
    phi_k = int(totient(k))
    coprime = np.array([math.gcd(a, k) == 1 for a in range(k)])

    result = CheckResult("brun_titchmarsh")
    counts = np.zeros(k, dtype=np.int64)
    previous = 0
    for t in grid:
        upto = int(np.searchsorted(primes, t, side="right"))
        counts += np.bincount(primes[previous:upto] % k, minlength=k)
        previous = upto
        if t <= 2 * k:
            continue
        rhs = 2 * t / (phi_k * math.log(t / k))
        for a in np.flatnonzero(coprime).tolist():
            result.record(int(counts[a]), rhs, strict=False, t=t, k=k, a=a)
    return result


def classical_audit(z, limit=None, max_modulus=AUDIT_MAX_MODULUS, workers=1):
    """
    Check the two explicit Mertens-type bounds and the Brun-Titchmarsh
    inequality for k <= max_modulus on a logarithmic grid of points up to z.

    Failures are collected in the report; nothing is raised for a failing
    inequality.
    """
    limit = DEFAULT_CONFIG["audit_limit"] if limit is None else int(limit)
    z = int(z)
    if z < 2:
        raise PreconditionError("audit needs z >= 2, got {}".format(z))
    if z > limit:
        raise BudgetExceededError(
            "audit up to {} exceeds the scan limit of {}".format(z, limit)
        )

    grid = sample_grid(z)
    primes = primes_upto(z)
    console.info("Auditing {} sample points up to {}".format(len(grid), z))

    report = AuditReport(_mertens_checks(primes, grid))
    brun_titchmarsh = CheckResult("brun_titchmarsh")
    jobs = [(k, grid, z) for k in range(1, max_modulus + 1)]
    for result in map_ordered(_brun_titchmarsh_job, jobs, workers):
        brun_titchmarsh.merge(result)
    report.checks.append(brun_titchmarsh)

    for check in report.checks:
        if check.passed:
            console.ok("{}: {} samples".format(check.name, check.samples))
        else:
            console.fail("{}: {} failures".format(check.name, len(check.failures)))
    return report
