from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from primebound.arith.factorization import Factorization, abundancy, factorize, sigma
from primebound.bounds.logvalue import LogValue
from primebound.bounds.theorem4 import C_one
from primebound.errors import PreconditionError
from primebound.sieve.basis import PrimeBasis

# Prime factors allowed in σ(N) for quasiperfect N and the theorem-4 family.
ALLOWED_MOD_8 = (1, 3)


def is_square(n):
    return n >= 0 and isqrt(n) ** 2 == n


def residues_mod_8_ok(value):
    """True when every prime factor of value is 1 or 3 mod 8."""
    return all(p % 8 in ALLOWED_MOD_8 for p in factorize(value).primes)


def cattaneo_filter(N):
    """(N is an odd square, every prime factor of σ(N) is 1 or 3 mod 8)."""
    N = int(N)
    if N < 1:
        raise PreconditionError("N must be >= 1, got {}".format(N))
    odd_square = N % 2 == 1 and is_square(N)
    return odd_square, residues_mod_8_ok(sigma(factorize(N)))


@dataclass(frozen=True)
class AmicableReport:
    m: int
    n: int
    sigma_m: int
    sigma_n: int

    @property
    def equation(self):
        return self.sigma_m == self.sigma_n == self.m + self.n

    @property
    def amicable(self):
        return self.equation and self.m != self.n

    @property
    def label(self):
        if self.amicable:
            return "amicable"
        if self.equation:
            return "perfect, not amicable"
        return "not amicable"

    def __bool__(self):
        return self.amicable

    def to_dict(self):
        return {
            "m": self.m,
            "n": self.n,
            "sigma_m": self.sigma_m,
            "sigma_n": self.sigma_n,
            "equation": self.equation,
            "amicable": self.amicable,
            "label": self.label,
        }


def amicable_check(m, n):
    m, n = int(m), int(n)
    if m < 1 or n < 1:
        raise PreconditionError("m and n must be >= 1, got ({}, {})".format(m, n))
    return AmicableReport(m, n, sigma(factorize(m)), sigma(factorize(n)))


@dataclass
class KishoreReport:
    """
    Checks of a coprime opposite-parity pair with σ(m)σ(n) = (m+n)².

    The N = mn/2 facts are only evaluated when the pair passes: h(N) > 2
    through (m+n)²/(2mn) > 2, whether 3σ(N) = σ(m)σ(n), and the mod-8 residues
    of the prime factors of σ(N).
    """

    m: int
    n: int
    coprime: bool
    equation: bool
    form: bool
    N: int = None
    ratio_gt_2: bool = None
    abundancy_gt_2: bool = None
    sigma_N: int = None
    sigma_N_is_third: bool = None
    residues_ok: bool = None

    @property
    def passed(self):
        return self.coprime and self.equation and self.form

    def to_dict(self):
        return {
            "m": self.m,
            "n": self.n,
            "coprime": self.coprime,
            "equation": self.equation,
            "form": self.form,
            "passed": self.passed,
            "N": self.N,
            "ratio_gt_2": self.ratio_gt_2,
            "abundancy_gt_2": self.abundancy_gt_2,
            "sigma_N": self.sigma_N,
            "sigma_N_is_third": self.sigma_N_is_third,
            "residues_ok": self.residues_ok,
        }


def kishore_check(m, n):
    m, n = int(m), int(n)
    if m < 2 or m % 2 or n < 1 or n % 2 == 0:
        raise PreconditionError(
            "kishore_check needs m even and n odd, got ({}, {})".format(m, n)
        )
    sigma_m = sigma(factorize(m))
    sigma_n = sigma(factorize(n))
    report = KishoreReport(
        m=m,
        n=n,
        coprime=gcd(m, n) == 1,
        equation=sigma_m * sigma_n == (m + n) ** 2,
        form=is_square(m // 2) and is_square(n),
    )
    if not report.passed:
        return report

    N = m * n // 2
    f = factorize(N)
    report.N = N
    report.ratio_gt_2 = Fraction((m + n) ** 2, 2 * m * n) > 2
    report.abundancy_gt_2 = abundancy(f) > 2
    report.sigma_N = sigma(f)
    report.sigma_N_is_third = 3 * report.sigma_N == sigma_m * sigma_n
    report.residues_ok = residues_mod_8_ok(report.sigma_N)
    return report


@dataclass(frozen=True)
class PatternReport:
    """
    Primes of f whose exponent e has e+1 divisible by no l in the basis.

    With squared=True the exponents are 2β and e+1 = 2β+1; an odd exponent
    breaks that form and leaves every prime unconstrained.
    """

    factorization: Factorization
    basis: PrimeBasis
    squared: bool
    unconstrained: tuple = ()
    form_ok: bool = True

    @property
    def s_min(self):
        return len(self.unconstrained)

    def to_dict(self):
        return {
            "factorization": str(self.factorization),
            "basis": str(self.basis),
            "squared": self.squared,
            "form_ok": self.form_ok,
            "unconstrained": list(self.unconstrained),
            "s_min": self.s_min,
        }


def pattern_classify(f, basis, squared):
    if squared and any(e % 2 for e in f.exponents):
        return PatternReport(f, basis, squared, tuple(f.primes), form_ok=False)
    unconstrained = tuple(
        p for p, e in f if not any((e + 1) % l == 0 for l in basis.primes)
    )
    return PatternReport(f, basis, squared, unconstrained)


@dataclass
class Theorem4Report:
    N: int
    clauses: dict = field(default_factory=dict)
    smallest_prime_factor: int = None
    spf_below_C1: bool = None
    C1: LogValue = None

    @property
    def all_hold(self):
        return all(self.clauses.values())

    def to_dict(self):
        return {
            "N": self.N,
            "clauses": self.clauses,
            "all_hold": self.all_hold,
            "smallest_prime_factor": self.smallest_prime_factor,
            "spf_below_C1": self.spf_below_C1,
            "C1": self.C1.to_dict() if self.C1 else None,
        }


def theorem4_hypothesis_check(f, basis):
    """
    Clauses of the odd-square family:
      (i) N odd with every exponent even
      (ii) every 2β+1 divisible by some l in the basis
      (iii) σ(N)/N >= 2
      (iv) no prime factor of σ(N) is 5 or 7 mod 8
    When all hold, the smallest prime factor of N is compared with C1.
    """
    N = f.value
    report = Theorem4Report(
        N=N,
        clauses={
            "i": N % 2 == 1 and all(e % 2 == 0 for e in f.exponents),
            "ii": pattern_classify(f, basis, squared=True).s_min == 0,
            "iii": abundancy(f) >= 2,
            "iv": residues_mod_8_ok(sigma(f)),
        },
    )
    if report.all_hold and N > 1:
        report.C1 = C_one(basis)
        report.smallest_prime_factor = f.primes[0]
        report.spf_below_C1 = LogValue.of(report.smallest_prime_factor) < report.C1
    return report
