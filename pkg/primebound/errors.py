class PrimeboundError(Exception):
    """Base class of every error raised by primebound."""


class PreconditionError(PrimeboundError, ValueError):
    """An operation was called outside the domain where it is defined."""


class BudgetExceededError(PrimeboundError, RuntimeError):
    """A configured resource budget (nodes, interval length, table size) ran out."""


class ConfigError(PrimeboundError):
    """The configuration file or the flags are invalid."""


class AuditFailure(PrimeboundError):
    """A checked identity or inequality does not hold."""
