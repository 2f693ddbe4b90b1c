"""Replicated stochastic programming with compromise-decision aggregation."""

from compromise.errors import InfeasibleError, ModelError, RecordError, SolverError

__all__ = [
    "InfeasibleError",
    "ModelError",
    "RecordError",
    "SolverError",
]
