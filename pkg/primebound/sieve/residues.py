from dataclasses import dataclass, field
from math import ceil
from types import MappingProxyType

import sympy
from sympy.ntheory import primitive_root
from sympy.ntheory.modular import crt

from primebound.arith.primes import primes_upto
from primebound.errors import PreconditionError


def _primes_below(z):
    """Primes p < z for a real sifting limit z."""
    return primes_upto(max(ceil(float(z)) - 1, 0)).tolist()


@dataclass(frozen=True)
class ResidueSystem:
    """
    Sifted residue classes Ω_p for the primes p < z.

    A prime without an entry has Ω_p = ∅, that is ρ(p) = 0. Every stored set
    satisfies ρ(p) = |Ω_p| < p.
    """

    z: float
    classes: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))

    def __post_init__(self):
        z = float(self.z)
        frozen = {}
        for p, residues in sorted(dict(self.classes).items()):
            p = int(p)
            if not sympy.isprime(p) or p >= z:
                raise PreconditionError(
                    "Ω_p given for p={}, expected a prime below z={}".format(p, z)
                )
            residues = frozenset(int(r) for r in residues)
            if any(not 0 <= r < p for r in residues):
                raise PreconditionError(
                    "residues {} are not reduced mod {}".format(sorted(residues), p)
                )
            if len(residues) >= p:
                raise PreconditionError(
                    "ρ({}) = {} must be below p".format(p, len(residues))
                )
            frozen[p] = residues
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "classes", MappingProxyType(frozen))

    @classmethod
    def uniform(cls, z, residues=(0,)):
        """The same classes modulo every prime p < z (ρ ≡ len(residues))."""
        return cls(z, {p: {r % p for r in residues} for p in _primes_below(z)})

    @property
    def rho(self):
        return {p: len(residues) for p, residues in self.classes.items()}

    @property
    def primes(self):
        return list(self.classes)

    def restrict(self, w):
        """The same system with Ω_p kept only for p < w."""
        return ResidueSystem(w, {p: r for p, r in self.classes.items() if p < w})

    def items(self):
        """(p, sorted residues) pairs, ascending in p; plain data, safe to pickle."""
        return tuple((p, tuple(sorted(r))) for p, r in self.classes.items())

    def to_text(self):
        lines = ["z: {:g}".format(self.z)]
        for p, residues in self.items():
            lines.append("{}: {}".format(p, ",".join(str(r) for r in residues)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        """Inverse of to_text. Lines starting with # are ignored."""
        z = None
        classes = {}
        for number, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition(":")
            if not sep:
                raise PreconditionError("line {}: expected 'p: r1,r2,...'".format(number))
            key = key.strip()
            try:
                if key == "z":
                    z = float(value)
                    continue
                classes[int(key)] = {int(r) for r in value.split(",") if r.strip()}
            except ValueError as e:
                raise PreconditionError("line {}: {}".format(number, e)) from e
        if z is None:
            z = max(classes, default=1) + 1
        return cls(z, classes)


def _require_prime(n, name):
    if not sympy.isprime(n):
        raise PreconditionError("{} must be prime, got {}".format(name, n))


def order_l_residues(r, l):
    """
    The l - 1 residues of multiplicative order l modulo the prime r.

    They are the powers h, h², ..., h^(l-1) of h = g^((r-1)/l) for a primitive
    root g, and also the roots of x^(l-1) + ... + x + 1 mod r.
    """
    r, l = int(r), int(l)
    _require_prime(r, "r")
    _require_prime(l, "l")
    if r % l != 1:
        raise PreconditionError(
            "no residues of order {} mod {}: {} is not 1 mod {}".format(l, r, r, l)
        )
    h = pow(primitive_root(r), (r - 1) // l, r)
    return frozenset(pow(h, i, r) for i in range(1, l))


def residue_system_theorem1(l, U, z):
    """Ω_p = {0} ∪ order-l residues for p in U, Ω_p = {0} for the other p < z."""
    l = int(l)
    _require_prime(l, "l")
    if float(z) <= 2:
        raise PreconditionError("z must exceed 2, got {}".format(z))
    U = {int(r) for r in U}
    for r in U:
        if r % l != 1:
            raise PreconditionError("{} in U is not 1 mod {}".format(r, l))

    classes = {}
    for p in _primes_below(z):
        if p in U:
            classes[p] = {0} | order_l_residues(p, l)
        else:
            classes[p] = {0}
    return ResidueSystem(z, classes)


def congruence_classes_a1_a2(l):
    """Residues mod 8l that are 1 mod l and 5 (a1) or 7 (a2) mod 8."""
    l = int(l)
    _require_prime(l, "l")
    if l == 2:
        raise PreconditionError("l must be an odd prime")
    a1, _ = crt([l, 8], [1, 5])
    a2, _ = crt([l, 8], [1, 7])
    return int(a1), int(a2)


def residue_system_theorem4(l, z):
    """Ω_p = {0} ∪ roots of x^(l-1)+...+1 for p ≡ a1, a2 (mod 8l), {0} elsewhere."""
    if float(z) <= 2:
        raise PreconditionError("z must exceed 2, got {}".format(z))
    a1, a2 = congruence_classes_a1_a2(l)
    modulus = 8 * int(l)

    classes = {}
    for p in _primes_below(z):
        if p % modulus in (a1, a2):
            classes[p] = {0} | order_l_residues(p, l)
        else:
            classes[p] = {0}
    return ResidueSystem(z, classes)
