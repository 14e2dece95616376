"""Exception hierarchy shared by all modules.

Each class carries the CLI exit code it maps to.
"""


class ErgmLimitError(Exception):
    exit_code = 1


class DomainError(ErgmLimitError, ValueError):
    """Argument outside the mathematical domain of an operation."""

    exit_code = 2


class RegionError(DomainError):
    """(e, t) pair outside the feasible edge/triangle region."""


class BoundaryError(DomainError):
    """Graphon touches 0 or 1 where an interior graphon is required."""


class ConvergenceError(ErgmLimitError, RuntimeError):
    exit_code = 3

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class SizeError(ErgmLimitError, ValueError):
    """Input too large for an exhaustive (exponential-time) computation."""

    exit_code = 4


class EmptyShellError(ErgmLimitError, ValueError):
    """No graph satisfies the edge-density shell constraint."""

    exit_code = 5
