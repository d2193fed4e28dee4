"""
Error hierarchy for the koenigs package.
Library code raises these; only the CLI turns them into exit codes.
"""

from typing import Optional


class KoenigsError(Exception):
    """Base class for all package errors"""


class DomainError(KoenigsError, ValueError):
    """Point or parameter outside the region an operation is defined on"""


class PoleError(DomainError):
    """Map evaluated at its pole (e.g. the Cayley transform at z = tau)"""


class BranchError(DomainError):
    """Fractional power or logarithm evaluated on its branch cut"""


class ConvergenceError(KoenigsError):
    """
    Iterative solver failed to converge.

    Attributes:
        residual: Last residual seen before giving up
        iterations: Number of iterations performed
    """

    def __init__(
        self,
        message: str,
        residual: Optional[float] = None,
        iterations: Optional[int] = None,
    ) -> None:
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class BracketError(ConvergenceError):
    """Coarse grid minimum sits on the edge of the search grid"""


class PreconditionError(KoenigsError, ValueError):
    """Operation precondition violated (grid too small, nesting failed, ...)"""


class InconclusiveError(KoenigsError):
    """Classification rules cannot decide the answer"""
