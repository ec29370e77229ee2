from dataclasses import dataclass
from math import fsum, log, prod

import sympy

from primebound.errors import PreconditionError


@dataclass(frozen=True)
class PrimeBasis:
    """The prime set 𝒫 with P = ∏p and φ(P) = ∏(p - 1)."""

    primes: tuple[int, ...]

    def __post_init__(self):
        primes = tuple(sorted(int(p) for p in self.primes))
        if not primes:
            raise PreconditionError("the prime basis must not be empty")
        if len(set(primes)) != len(primes):
            raise PreconditionError("duplicate primes in basis {}".format(primes))
        for p in primes:
            if not sympy.isprime(p):
                raise PreconditionError("{} is not prime".format(p))
        object.__setattr__(self, "primes", primes)

    @classmethod
    def parse(cls, text):
        """Parse a comma separated list such as '3,5'."""
        try:
            primes = [int(token) for token in str(text).split(",") if token.strip()]
        except ValueError as e:
            raise PreconditionError("invalid prime list {!r}".format(text)) from e
        return cls(tuple(primes))

    @property
    def P(self):
        return prod(self.primes)

    @property
    def phi_P(self):
        return prod(p - 1 for p in self.primes)

    @property
    def ln_P(self):
        return fsum(log(p) for p in self.primes)

    @property
    def ln_phi_P(self):
        return fsum(log(p - 1) for p in self.primes)

    @property
    def size(self):
        return len(self.primes)

    def __contains__(self, p):
        return p in self.primes

    def __str__(self):
        return ",".join(str(p) for p in self.primes)
