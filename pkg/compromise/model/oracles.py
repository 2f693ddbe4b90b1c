"""Cost, subgradient and exact-expectation oracles of a stochastic program."""

import numpy as np

from compromise.errors import ModelError
from compromise.model.types import StochasticProgram, Vector

__all__ = [
    "evaluate_cost",
    "subgradient",
    "true_objective",
    "true_subgradient",
]


def _require_feasible(prob: StochasticProgram, x: Vector) -> Vector:
    point = np.asarray(x, dtype=np.float64)
    if not prob.region.contains(point):
        raise ModelError("decision outside feasible region")
    return point


def evaluate_cost(prob: StochasticProgram, x: Vector, xi: Vector) -> float:
    """Return ``F(x, xi)``.

    Raises:
        ModelError: If ``x`` is outside the feasible region.
        InfeasibleError: Propagated from the recourse solver of two-stage costs.
    """
    point = _require_feasible(prob, x)
    return prob.cost.value(point, np.asarray(xi, dtype=np.float64))


def subgradient(prob: StochasticProgram, x: Vector, xi: Vector) -> Vector:
    """Return a subgradient of ``F(., xi)`` at ``x``."""
    point = _require_feasible(prob, x)
    return prob.cost.subgradient(point, np.asarray(xi, dtype=np.float64))


def true_objective(prob: StochasticProgram, x: Vector) -> float:
    """Exact expectation ``f(x)`` over the atoms of a finite scenario space.

    Raises:
        ModelError: For sampler-mode spaces or infeasible ``x``.
    """
    space = prob.scenarios
    if not space.is_finite or space.atoms is None or space.probabilities is None:
        raise ModelError("exact expectation unavailable")
    point = _require_feasible(prob, x)
    return float(space.probabilities @ prob.cost.values(point, space.atoms))


def true_subgradient(prob: StochasticProgram, x: Vector) -> Vector:
    """Probability-weighted subgradient of ``f`` at ``x``."""
    space = prob.scenarios
    if not space.is_finite or space.atoms is None or space.probabilities is None:
        raise ModelError("exact expectation unavailable")
    point = _require_feasible(prob, x)
    return np.asarray(space.probabilities @ prob.cost.subgradients(point, space.atoms))
