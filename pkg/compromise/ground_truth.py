"""Brute-force ground truth for desk-scale programs."""

import logging
from dataclasses import dataclass, replace

import numpy as np

from compromise.errors import ModelError
from compromise.model.oracles import true_objective, true_subgradient
from compromise.model.region import region_grid
from compromise.model.types import (
    ExtensiveFormCost,
    FeasibleRegion,
    Matrix,
    StochasticProgram,
    Vector,
)
from compromise.qp import project_onto_region, proximal_bundle

__all__ = ["TrueObjectiveOracle", "TrueOptimum", "epsilon_optimal_set", "true_optimum"]

_logger = logging.getLogger(__name__)

_MAX_DIMENSION = 3


@dataclass(frozen=True, eq=False)
class TrueObjectiveOracle:
    """The exact expectation ``f`` of a finite program as a convex oracle."""

    program: StochasticProgram

    @property
    def region(self) -> FeasibleRegion:
        return self.program.region

    def value(self, x: Vector) -> float:
        return true_objective(self.program, project_onto_region(x, self.region))

    def subgradient(self, x: Vector) -> Vector:
        return true_subgradient(self.program, project_onto_region(x, self.region))


@dataclass(frozen=True, eq=False)
class TrueOptimum:
    """Optimal value, a minimizer and the gridded ``epsilon``-optimal set.

    Attributes:
        value: ``theta*``.
        minimizer: A point attaining ``theta*`` within solver tolerance.
        grid: Grid points of the region.
        grid_values: ``f`` at every grid point.
        points: ``X*_eps`` restricted to the grid.
        epsilon: Tolerance used for ``points``.
    """

    value: float
    minimizer: Vector
    grid: Matrix
    grid_values: Vector
    points: Matrix
    epsilon: float


def epsilon_optimal_set(optimum: TrueOptimum, epsilon: float) -> Matrix:
    """Grid points with ``f <= theta* + epsilon``.

    The threshold never drops below the grid minimum, so the set is never
    empty even when ``theta*`` lies between grid points.
    """
    if epsilon < 0.0:
        raise ModelError("epsilon must be nonnegative")
    threshold = max(optimum.value + epsilon, float(optimum.grid_values.min()))
    return optimum.grid[optimum.grid_values <= threshold]


def true_optimum(prob: StochasticProgram, grid_step: float, epsilon: float = 0.0) -> TrueOptimum:
    """Minimize the exact expectation on a grid and polish the best point.

    Programs whose cost has an extensive form are polished by that QP;
    others by a proximal bundle started at the best grid point.

    Raises:
        ModelError: If the dimension exceeds three, the scenario space is not
            finite or ``epsilon < 0``.
        SolverError: If the bundle polish does not converge.
    """
    if prob.dimension > _MAX_DIMENSION:
        raise ModelError("grid oracle limited to desk-scale dimensions")
    space = prob.scenarios
    if not space.is_finite or space.atoms is None or space.probabilities is None:
        raise ModelError("exact expectation unavailable")
    grid = region_grid(prob.region, grid_step)
    values = np.array([true_objective(prob, x) for x in grid])
    best = int(np.argmin(values))

    cost = prob.cost
    if isinstance(cost, ExtensiveFormCost):
        minimizer, value = cost.extensive_form(prob.region, space.atoms, space.probabilities)
        _logger.debug(
            "extensive form %.8g against grid minimum %.8g", value, float(values[best])
        )
    else:
        polished = proximal_bundle(TrueObjectiveOracle(prob), start=grid[best])
        minimizer, value = polished.point, polished.value
    if values[best] < value:
        minimizer, value = grid[best].copy(), float(values[best])

    optimum = TrueOptimum(
        value=float(value),
        minimizer=np.asarray(minimizer),
        grid=grid,
        grid_values=values,
        points=grid,
        epsilon=epsilon,
    )
    return replace(optimum, points=epsilon_optimal_set(optimum, epsilon))
