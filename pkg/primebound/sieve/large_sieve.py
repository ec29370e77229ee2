import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from scipy.special import xlogy

from primebound.constants import DEFAULT_CONFIG, EXACT_MODE_MAX_Z
from primebound.errors import BudgetExceededError, PreconditionError


def g_weight(p, rho, exact=False):
    """g(p) = ρ/(p - ρ)."""
    if not 0 <= rho < p:
        raise PreconditionError("g(p) needs 0 <= ρ < p, got p={}, ρ={}".format(p, rho))
    if exact:
        return Fraction(rho, p - rho)
    return rho / (p - rho)


def _check_exact(system):
    if system.z > EXACT_MODE_MAX_Z:
        raise PreconditionError(
            "exact mode is limited to z <= {}, got z={:g}".format(
                EXACT_MODE_MAX_Z, system.z
            )
        )


def _divisor_terms(weights, T, node_budget, one):
    """
    Yield g(d) for every squarefree d <= T built from the weighted primes.

    Depth-first over ascending primes: once d*p exceeds T no larger prime can
    extend d, so the branch is cut there.
    """
    nodes = 0
    stack = [(1, one, 0)]
    while stack:
        d, g, start = stack.pop()
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceededError(
                "G_z(T) enumeration exceeded the node budget of {}".format(node_budget)
            )
        yield g
        for i in range(start, len(weights)):
            p, weight = weights[i]
            if d * p > T:
                break
            stack.append((d * p, g * weight, i + 1))


def big_G(system, T, node_budget=None, exact=False):
    """
    G_z(T) = Σ g(d) over squarefree d <= T with every prime factor below z.

    Primes with ρ(p) = 0 have g(p) = 0 and are left out of the enumeration.
    """
    if T < 1:
        raise PreconditionError("G_z(T) needs T >= 1, got {}".format(T))
    if exact:
        _check_exact(system)
    node_budget = DEFAULT_CONFIG["node_budget"] if node_budget is None else node_budget

    weights = [
        (p, g_weight(p, rho, exact)) for p, rho in system.rho.items() if rho > 0
    ]
    if not weights:
        return Fraction(1) if exact else 1.0
    if exact:
        return sum(_divisor_terms(weights, T, node_budget, Fraction(1)), Fraction(0))
    terms = _divisor_terms(weights, T, node_budget, 1.0)
    return math.fsum(terms)


def V_of(system, exact=False):
    """V(P(z)) = ∏_{p<z} (1 - ρ(p)/p)."""
    if exact:
        _check_exact(system)
        return math.prod(
            (Fraction(p - rho, p) for p, rho in system.rho.items()), start=Fraction(1)
        )
    return math.exp(math.fsum(math.log1p(-rho / p) for p, rho in system.rho.items()))


def B_of(system):
    """B(z) = (1/log z) Σ_{p<z} ρ(p) log p / p; 0 for z <= 2."""
    if system.z <= 2:
        return 0.0
    total = math.fsum(rho * math.log(p) / p for p, rho in system.rho.items())
    return total / math.log(system.z)


# Largest double below 1; ψ0 stays in [0, 1).
PSI0_MAX = math.nextafter(1.0, 0.0)


def psi1(K, t):
    """max{0, t log(t/K) - t + K}, with value K at t = 0."""
    if K <= 0:
        raise PreconditionError("ψ1 needs K > 0, got {}".format(K))
    if t < 0:
        raise PreconditionError("ψ1 needs t >= 0, got {}".format(t))
    return max(0.0, float(xlogy(t, t / K)) - t + K)


def psi0(B, v, u):
    """1 - exp(-ψ1(B, v/u)), defined for v/u >= B, kept below 1 in floating point."""
    if v < u * B:
        raise PreconditionError(
            "ψ0 needs v/u >= B, got v/u={!r} < B={!r}".format(v / u, B)
        )
    t = max(v / u, B)
    if B == 0:
        return PSI0_MAX
    return min(-math.expm1(-psi1(B, t)), PSI0_MAX)


@dataclass(frozen=True)
class SieveBoundReport:
    X: float
    w: float
    G_value: float
    bound: float
    empirical: Optional[int] = None

    @property
    def holds(self):
        return self.empirical is None or self.empirical <= self.bound

    def to_dict(self):
        return {
            "X": self.X,
            "w": self.w,
            "G": self.G_value,
            "bound": self.bound,
            "empirical": self.empirical,
            "holds": self.holds,
        }


def large_sieve_bound(X, w, system, node_budget=None, empirical=None):
    """
    The large sieve upper bound (X + w²)/G(w) for the number of integers of
    an interval of length X that avoid every Ω_p, p < w.

    G is evaluated on the system restricted to p < w, so system.z must be at
    least w.
    """
    if w < 1:
        raise PreconditionError("w must be at least 1, got {}".format(w))
    if X < 0:
        raise PreconditionError("X must be non-negative, got {}".format(X))
    if system.z < w:
        raise PreconditionError(
            "system covers p < {:g} but w = {:g}".format(system.z, w)
        )
    G_value = big_G(system.restrict(w), w, node_budget)
    return SieveBoundReport(
        X=X, w=w, G_value=G_value, bound=(X + w * w) / G_value, empirical=empirical
    )


def G_lower_bound(system, x, u):
    """ψ0(B(z), v, u)/V(P(z)) with v = log x/log z: a lower bound for G_z(x^(1/u))."""
    if system.z < 2:
        raise PreconditionError("z must be at least 2, got {:g}".format(system.z))
    v = math.log(x) / math.log(system.z)
    B = B_of(system)
    if v < u * B:
        raise PreconditionError(
            "v = {:.6g} is below u*B(z) = {:.6g}".format(v, u * B)
        )
    return psi0(B, v, u) / V_of(system)
