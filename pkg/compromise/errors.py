"""Exception types shared by every solver package.

All classes derive from built-in exceptions so callers that only know about
``ValueError`` or ``RuntimeError`` keep working.
"""

__all__ = [
    "InfeasibleError",
    "ModelError",
    "RecordError",
    "SolverError",
]


class ModelError(ValueError):
    """Invalid problem data or a violated precondition."""


class SolverError(RuntimeError):
    """A solver stopped without reaching its termination condition.

    Attributes:
        problem: The QP whose solve failed, kept for text dumps; ``None`` when
            the failure is not tied to a single QP.
    """

    def __init__(self, message: str, *, problem: object | None = None) -> None:
        super().__init__(message)
        self.problem = problem


class InfeasibleError(SolverError):
    """A subproblem is infeasible or its dual is unbounded."""


class RecordError(ValueError):
    """A persisted experiment record is missing or corrupt."""
