import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from primebound.arith.factorization import factorize, omega_counts
from primebound.bounds.logvalue import LogValue
from primebound.constants import EPS_SWEEP, EULER_GAMMA, THEOREM1
from primebound.errors import PreconditionError
from primebound.sieve.basis import PrimeBasis


@dataclass(frozen=True)
class Theorem1Inputs:
    """n/d > 1 in lowest terms, s >= 0 extra primes, basis 𝒫 and ε > 0."""

    n: int
    d: int
    s: int
    basis: PrimeBasis
    epsilon: float = 1.0

    def __post_init__(self):
        if self.d < 1 or self.n < 1:
            raise PreconditionError("n and d must be positive")
        if self.s < 0:
            raise PreconditionError("s must be non-negative, got {}".format(self.s))
        if math.gcd(self.n, self.d) != 1:
            raise PreconditionError(
                "n/d = {}/{} is not in lowest terms".format(self.n, self.d)
            )
        if self.n <= self.d:
            raise PreconditionError(
                "n/d = {}/{} must exceed 1".format(self.n, self.d)
            )
        if not self.epsilon > 0:
            raise PreconditionError("ε must be positive, got {}".format(self.epsilon))

    @property
    def ln_ratio(self):
        return math.log(self.n) - math.log(self.d)


@dataclass(frozen=True)
class ConstantChain:
    """The sieve parameters of the proof for one l, with κ = (l - 1)/φ(P)."""

    kappa: float
    B0: float = THEOREM1["B0"]
    B1_ln_factor: float = THEOREM1["B1_offset"] - EULER_GAMMA
    B2: float = THEOREM1["B2_total"] / 2
    B3: float = THEOREM1["B3_total"] / 2
    u: float = THEOREM1["u"]
    v: float = THEOREM1["v"]

    def __post_init__(self):
        if not self.v > self.B0 * self.u:
            raise PreconditionError(
                "v = {} must exceed B0*u = {}".format(self.v, self.B0 * self.u)
            )

    @classmethod
    def for_l(cls, basis, l):
        return cls(kappa=(l - 1) / basis.phi_P)


def s_zero(s, n, basis):
    """s0 = s + ω(n) + Ω_𝒫(n)."""
    if n < 1:
        raise PreconditionError("n must be positive, got {}".format(n))
    omega, _, big_omega_basis = omega_counts(factorize(n), basis)
    return s + omega + big_omega_basis


def x_one_branches(s0, l, basis):
    """The four candidates for log x1(l), keyed by branch name."""
    if l not in basis:
        raise PreconditionError("l = {} is not in the basis {}".format(l, basis))
    try:
        exp_P = float(basis.P)
    except OverflowError:
        raise PreconditionError(
            "log x1 >= P = exp({:.6g}) is beyond the float range".format(basis.ln_P)
        ) from None
    return {
        "exp_P": exp_P,
        "exp_101l": float(THEOREM1["x1_linear_factor"] * l),
        "exp_exp18": math.exp(THEOREM1["x1_double_exp"]),
        "s0": math.log(THEOREM1["x1_s0_factor"] * s0 * (l - 1) + 1),
    }


def _argmax(candidates):
    """Key of the largest value; ties resolve to the first key."""
    best = None
    for key, value in candidates.items():
        if best is None or value > candidates[best]:
            best = key
    return best


def x_one(s0, l, basis):
    """x1(l) = max{exp P, exp(101 l), exp(exp 18), 10 s0 (l - 1) + 1}."""
    branches = x_one_branches(s0, l, basis)
    return LogValue(branches[_argmax(branches)])


def solve_L(epsilon, n):
    """
    log L for the root of Ω(n) = ε x/log²x on the increasing branch x >= e².

    Solved as y - 2 log y = log(Ω/ε) in y = log x. When Ω/ε < e²/4 there is no
    root with x >= e² and the result is clamped to y = 2. Returns (y, clamped).
    """
    if n < 2:
        raise PreconditionError("L(ε, n) needs n >= 2, got {}".format(n))
    if not epsilon > 0:
        raise PreconditionError("ε must be positive, got {}".format(epsilon))
    big_omega = sum(e for _, e in factorize(n))
    target = math.log(big_omega / epsilon)

    def g(y):
        return y - 2 * math.log(y) - target

    if g(2.0) >= 0:
        return 2.0, g(2.0) > 0
    hi = 4.0
    while g(hi) < 0:
        hi *= 2
    y = bisect(g, 2.0, hi, xtol=1e-14, rtol=1e-13, maxiter=400)
    return y, False


def L_of(epsilon, n):
    y, _ = solve_L(epsilon, n)
    return math.exp(y)


@dataclass
class C0Result:
    ln: LogValue
    branch: str
    l: int
    per_l: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def to_dict(self):
        return {
            **self.ln.to_dict(),
            "branch": self.branch,
            "l": self.l,
            "per_l": self.per_l,
            "warnings": self.warnings,
        }


def exp_term(inputs, l, ln_x1):
    """(17.62196 φ(P) + 129.5214 (l-1)) |𝒫| log x1 / ((l-1) log(n/d))."""
    basis = inputs.basis
    ln_numerator = np.logaddexp(
        math.log(THEOREM1["B2_total"]) + basis.ln_phi_P,
        math.log(THEOREM1["B3_total"] * (l - 1)),
    )
    ln_value = (
        float(ln_numerator)
        + math.log(basis.size * ln_x1)
        - math.log((l - 1) * inputs.ln_ratio)
    )
    try:
        return math.exp(ln_value)
    except OverflowError:
        raise PreconditionError(
            "log C0 >= exp({:.6g}) is beyond the float range".format(ln_value)
        ) from None


def C_zero(inputs):
    """
    log C0 = max over l in 𝒫 of the candidates 2(d+1)s, x1(l)^8.35, L(ε, n)
    and the exponential term. With s = 0 the 2(d+1)s candidate is vacuous and
    left out.
    """
    basis = inputs.basis
    s0 = s_zero(inputs.s, inputs.n, basis)
    ln_L, clamped = solve_L(inputs.epsilon, inputs.n)

    warnings = []
    if basis.P < THEOREM1["min_P"]:
        warnings.append(
            "P = {} is below {}: outside the range the bound is proved for".format(
                basis.P, THEOREM1["min_P"]
            )
        )
    if clamped:
        warnings.append("Ω(n)/ε < e²/4: L(ε, n) clamped to e²")

    per_l = []
    best = None
    for l in basis.primes:
        x1 = x_one_branches(s0, l, basis)
        ln_x1 = x1[_argmax(x1)]
        candidates = {}
        if inputs.s > 0:
            candidates["2(d+1)s"] = math.log(2 * (inputs.d + 1) * inputs.s)
        candidates["x1_power"] = THEOREM1["v"] * ln_x1
        candidates["L"] = ln_L
        candidates["exp_term"] = exp_term(inputs, l, ln_x1)
        branch = _argmax(candidates)
        if not math.isfinite(candidates[branch]):
            raise PreconditionError(
                "log C0 for l = {} is beyond the float range".format(l)
            )
        per_l.append(
            {
                "l": l,
                "ln_x1": ln_x1,
                "x1_branch": _argmax(x1),
                "candidates": candidates,
                "branch": branch,
                "ln": candidates[branch],
            }
        )
        if best is None or candidates[branch] > best["ln"]:
            best = per_l[-1]

    return C0Result(
        ln=LogValue(best["ln"]),
        branch=best["branch"],
        l=best["l"],
        per_l=per_l,
        warnings=warnings,
    )


def eps_sweep(inputs, grid=EPS_SWEEP):
    """C0 for every ε of the grid, and the ε giving the smallest log C0."""
    results = []
    for epsilon in grid:
        trial = Theorem1Inputs(inputs.n, inputs.d, inputs.s, inputs.basis, epsilon)
        results.append({"epsilon": epsilon, **C_zero(trial).to_dict()})
    best = min(results, key=lambda r: r["ln"])
    return {"sweep": results, "best_epsilon": best["epsilon"], "best_ln": best["ln"]}
