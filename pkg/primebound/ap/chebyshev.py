import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from sympy import totient

from primebound.arith.primes import check_progression, primes_upto
from primebound.constants import AP_CONSTANTS
from primebound.errors import PreconditionError


def _class_primes(x, k, a):
    """Primes p <= x with p ≡ a (mod k), as float64."""
    return primes_upto(math.floor(x), (k, a)).astype(np.float64)


def _check_range(w, z):
    if w != 0 and not 2 <= w:
        raise PreconditionError("w must be 0 or at least 2, got {}".format(w))
    if z < w:
        raise PreconditionError("empty range: w={} > z={}".format(w, z))


def theta(x, k=1, a=0):
    """θ(x; k, a) = Σ log p over primes p <= x, p ≡ a (mod k)."""
    k, a = check_progression(k, a)
    return math.fsum(np.log(_class_primes(x, k, a)))


def psi(x, k=1, a=0):
    """ψ(x; k, a) = Σ Λ(n) over n <= x, n ≡ a (mod k)."""
    k, a = check_progression(k, a)
    x = math.floor(x)
    terms = []
    m = 1
    while 2**m <= x:
        primes = primes_upto(math.floor(x ** (1 / m)) + 1)
        primes = primes[primes**m <= x]
        powers = primes**m
        terms.append(np.log(primes[powers % k == a].astype(np.float64)))
        m += 1
    return math.fsum(np.concatenate(terms)) if terms else 0.0


def chebyshev(x, k=1, a=0, kind="theta"):
    if x < 2:
        raise PreconditionError("x must be at least 2, got {}".format(x))
    if kind == "theta":
        return theta(x, k, a)
    if kind == "psi":
        return psi(x, k, a)
    raise PreconditionError("kind must be 'theta' or 'psi', got {!r}".format(kind))


def logp_over_p_sum(w, z, k=1, a=0):
    """Σ log p / p over primes w < p <= z in the class; w = 0 starts at 2."""
    _check_range(w, z)
    k, a = check_progression(k, a)
    primes = _class_primes(z, k, a)
    primes = primes[primes > w]
    return math.fsum(np.log(primes) / primes)


def mertens_ap_product(w, z, k=1, a=0):
    """∏ (1 - 1/p) over primes w <= p < z in the class."""
    _check_range(w, z)
    k, a = check_progression(k, a)
    primes = _class_primes(math.ceil(z) - 1, k, a)
    primes = primes[(primes >= w) & (primes < z)]
    return math.exp(math.fsum(np.log1p(-1 / primes)))


class PartialSummation(NamedTuple):
    lhs: float
    rhs: float

    @property
    def relative_error(self):
        scale = max(abs(self.lhs), abs(self.rhs))
        return abs(self.lhs - self.rhs) / scale if scale else 0.0


def partial_summation_check(w, z, k=1, a=0):
    """
    Both sides of Σ_{w<p<=z} log p/p = θ(z)/z - θ(w)/w + ∫_w^z θ(t)/t² dt.

    θ is a step function, so the integral is the finite sum of
    θ(t_j)(1/t_j - 1/t_(j+1)) over the jump points t_j in (w, z].
    """
    if not 2 <= w < z:
        raise PreconditionError("need 2 <= w < z, got w={}, z={}".format(w, z))
    k, a = check_progression(k, a)
    lhs = logp_over_p_sum(w, z, k, a)

    theta_w = theta(w, k, a)
    primes = _class_primes(z, k, a)
    jumps = primes[primes > w]
    levels = theta_w + np.cumsum(np.log(jumps))
    theta_z = float(levels[-1]) if len(jumps) else theta_w

    starts = np.concatenate(([w], jumps))
    ends = np.concatenate((jumps, [z]))
    values = np.concatenate(([theta_w], levels))
    integral = values * (1 / starts - 1 / ends)

    rhs = math.fsum([theta_z / z, -theta_w / w, *integral.tolist()])
    return PartialSummation(lhs, rhs)


@dataclass(frozen=True)
class APStatistics:
    x: float
    k: int
    a: int
    theta: float
    psi: float
    logp_over_p: float
    mertens_product: float
    error_ratio: float
    cited_constants: dict

    def to_dict(self):
        return asdict(self)


def ap_statistics(x, k=1, a=0):
    """
    θ, ψ, the log-sum, the Mertens product and the normalised ψ error
    |ψ(x;k,a) - x/φ(k)| φ(k) log x / x for one progression. The cited
    constants, A0 among them, hold only beyond exp(exp(13.3)) and are reported
    alongside.
    """
    k, a = check_progression(k, a)
    theta_value = chebyshev(x, k, a, "theta")
    psi_value = chebyshev(x, k, a, "psi")
    phi_k = int(totient(k))
    return APStatistics(
        x=float(x),
        k=k,
        a=a,
        theta=theta_value,
        psi=psi_value,
        logp_over_p=logp_over_p_sum(0, x, k, a),
        mertens_product=mertens_ap_product(2, x, k, a),
        error_ratio=abs(psi_value - x / phi_k) * phi_k * math.log(x) / x,
        cited_constants=dict(AP_CONSTANTS),
    )
