import math
from dataclasses import dataclass, field

import numpy as np

from primebound.arith.primes import primes_upto
from primebound.sieve.empirical import sift_count
from primebound.sieve.large_sieve import (
    B_of,
    G_lower_bound,
    big_G,
    large_sieve_bound,
)
from primebound.sieve.residues import (
    ResidueSystem,
    order_l_residues,
    residue_system_theorem1,
    residue_system_theorem4,
)

CONSTRUCTION_LS = (2, 3, 5, 7, 11, 13)

# Relative slack allowed when comparing G against its lower bound.
LOWER_BOUND_SLACK = 1e-12


def random_system(rng, z_max=60, max_rho=3):
    """A random system with 0 <= ρ(p) <= min(max_rho, p - 1) for p < z."""
    z = int(rng.integers(3, z_max + 1))
    classes = {}
    for p in primes_upto(z - 1).tolist():
        rho = int(rng.integers(0, min(max_rho, p - 1) + 1))
        if rho:
            classes[p] = rng.choice(p, size=rho, replace=False).tolist()
    return ResidueSystem(z, classes)


def random_construction(rng, z_max=1000):
    """
    A theorem-1 or theorem-4 system with random l and z <= z_max.

    Theorem-1 systems take each prime r < z with r ≡ 1 (mod l) into U with
    probability 1/2. Theorem-4 systems need an odd l.
    Returns (kind, l, system).
    """
    z = int(rng.integers(3, z_max + 1))
    if rng.integers(0, 2):
        l = int(rng.choice(CONSTRUCTION_LS[1:]))
        return "theorem4", l, residue_system_theorem4(l, z)
    l = int(rng.choice(CONSTRUCTION_LS))
    candidates = [r for r in primes_upto(z - 1).tolist() if r % l == 1]
    U = [r for r in candidates if rng.integers(0, 2)]
    return "theorem1", l, residue_system_theorem1(l, U, z)


@dataclass
class SweepReport:
    trials: int = 0
    lower_bound_trials: int = 0
    sieve_checks: int = 0
    lower_bound_checks: int = 0
    constructions: dict = field(default_factory=lambda: {"theorem1": 0, "theorem4": 0})
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def to_dict(self):
        return {
            "trials": self.trials,
            "lower_bound_trials": self.lower_bound_trials,
            "sieve_checks": self.sieve_checks,
            "lower_bound_checks": self.lower_bound_checks,
            "constructions": self.constructions,
            "failures": self.failures,
            "ok": self.ok,
        }


def _large_sieve_trials(rng, report, trials, max_X, z_max, workers):
    for trial in range(trials):
        kind, l, system = random_construction(rng, z_max)
        report.constructions[kind] += 1
        start = int(rng.integers(1, 10**6))
        X = int(rng.integers(0, max_X + 1))
        w = float(rng.integers(1, int(system.z) + 1))

        empirical = sift_count(start, X, system.restrict(w), workers=workers)
        sieve = large_sieve_bound(X, w, system, empirical=empirical)
        report.sieve_checks += 1
        if not sieve.holds:
            report.failures.append(
                {
                    "trial": trial,
                    "check": "large_sieve",
                    "construction": kind,
                    "l": l,
                    "z": system.z,
                    **sieve.to_dict(),
                }
            )
        report.trials += 1


def _lower_bound_trials(rng, report, trials):
    for trial in range(trials):
        system = random_system(rng)
        u = float(rng.uniform(1.0, 3.0))
        x = float(system.z) ** float(rng.uniform(1.0, 12.0))
        v = math.log(x) / math.log(system.z)
        if v >= u * B_of(system):
            lower = G_lower_bound(system, x, u)
            G = big_G(system, x ** (1 / u))
            report.lower_bound_checks += 1
            if G < lower * (1 - LOWER_BOUND_SLACK):
                report.failures.append(
                    {"trial": trial, "check": "lower_bound", "G": G, "lower": lower}
                )
        report.lower_bound_trials += 1


def soundness_sweep(
    trials, seed, max_X=10**6, workers=1, lower_bound_trials=None, z_max=1000
):
    """
    Randomised check of both sieve inequalities.

    The large sieve part draws theorem-1 and theorem-4 systems with z <= z_max,
    an interval of length X <= max_X and a level w <= z, and checks the
    exhaustive sift count against (X + w²)/G(w). The lower bound part draws
    arbitrary systems with z <= 60, where G is enumerable, and checks
    G_z(x^(1/u)) against ψ0/V whenever v >= u*B(z) holds.
    """
    rng = np.random.default_rng(seed)
    report = SweepReport()
    _large_sieve_trials(rng, report, trials, max_X, z_max, workers)
    if lower_bound_trials is None:
        lower_bound_trials = trials
    _lower_bound_trials(rng, report, lower_bound_trials)
    return report


def order_equivalence_check(limit, ls=(2, 3, 5, 7)):
    """
    For every prime r < limit with r ≡ 1 (mod l), compare the residues q with
    r | 1 + q + ... + q^(l-1) against the order-l residues mod r.
    """
    checked = 0
    mismatches = []
    for l in ls:
        for r in primes_upto(limit - 1).tolist():
            if r % l != 1:
                continue
            q = np.arange(r, dtype=np.int64)
            total = np.zeros(r, dtype=np.int64)
            power = np.ones(r, dtype=np.int64)
            for _ in range(l):
                total = (total + power) % r
                power = (power * q) % r
            roots = set(np.flatnonzero(total == 0).tolist())
            if roots != set(order_l_residues(r, l)):
                mismatches.append({"r": r, "l": l})
            checked += 1
    return {"checked": checked, "mismatches": mismatches, "ok": not mismatches}
