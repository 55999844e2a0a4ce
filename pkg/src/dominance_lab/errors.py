"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: usage and input problems exit with 2,
numerical failures (singular configurations, non-finite intermediates)
exit with 3.
"""


class DominanceError(Exception):
    """Base class for all errors raised by dominance_lab."""


class DomainError(DominanceError, ValueError):
    """A parameter lies outside its admissible domain (exit code 2)."""


class DataError(DominanceError, ValueError):
    """Sample input is unusable: too small, non-finite, degenerate (exit code 2)."""


class SingularityError(DominanceError, ArithmeticError):
    """A numerical procedure hit a singular configuration (exit code 3)."""
