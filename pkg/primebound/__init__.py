"""Explicit smallest-prime-factor bounds for multiperfect, quasiperfect and amicable-type numbers."""

__version__ = "0.1.0"
