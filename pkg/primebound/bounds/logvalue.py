import math
from dataclasses import dataclass

from primebound.constants import NESTED_RENDER_THRESHOLD
from primebound.errors import PreconditionError


@dataclass(frozen=True, order=True)
class LogValue:
    """
    A positive real held as its natural logarithm.

    Products add logarithms and powers scale them, so magnitudes such as
    exp(10^10) are never materialised.
    """

    ln: float

    def __post_init__(self):
        ln = float(self.ln)
        if not math.isfinite(ln):
            raise PreconditionError("LogValue needs a finite logarithm, got {}".format(ln))
        object.__setattr__(self, "ln", ln)

    @classmethod
    def of(cls, value):
        """The LogValue of a positive number; integers of any size are accepted."""
        if value <= 0:
            raise PreconditionError("LogValue needs a positive value, got {}".format(value))
        return cls(math.log(value))

    def __mul__(self, other):
        if not isinstance(other, LogValue):
            return NotImplemented
        return LogValue(self.ln + other.ln)

    def __truediv__(self, other):
        if not isinstance(other, LogValue):
            return NotImplemented
        return LogValue(self.ln - other.ln)

    def __pow__(self, exponent):
        return LogValue(self.ln * exponent)

    @property
    def log10(self):
        return self.ln / math.log(10)

    @property
    def nested(self):
        """'exp(exp(m))' above the nesting threshold, 'exp(ln)' below it."""
        if self.ln > NESTED_RENDER_THRESHOLD:
            return "exp(exp({:.12g}))".format(math.log(self.ln))
        return "exp({:.12g})".format(self.ln)

    def to_dict(self):
        return {"ln": self.ln, "log10": self.log10, "nested": self.nested}

    def __str__(self):
        return self.nested
