import math

import sympy

from primebound.bounds.logvalue import LogValue
from primebound.constants import THEOREM4
from primebound.errors import PreconditionError


def _require_prime(l):
    if not sympy.isprime(l):
        raise PreconditionError("l must be prime, got {}".format(l))


def x_three(l):
    """x3(l) = max{exp(8l), exp(exp(13.3))}."""
    _require_prime(l)
    return LogValue(
        max(
            THEOREM4["x3_linear_factor"] * l,
            math.exp(THEOREM4["x3_double_exp"]),
        )
    )


def x_four(l):
    """x4(l) = x3(l)^101, the sieve threshold of the odd-square case."""
    return x_three(l) ** THEOREM4["x4_power"]


def C_one_per_l(basis):
    """x3(l)^(2310 |𝒫|²) for every l in 𝒫."""
    exponent = THEOREM4["C1_exponent"] * basis.size**2
    return {l: x_three(l) ** exponent for l in basis.primes}


def C_one(basis):
    """C1 = max over l in 𝒫 of x3(l)^(2310 |𝒫|²)."""
    return max(C_one_per_l(basis).values())
