"""Data types for SAA replications and compromise decisions."""

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from compromise.cutplane.types import PiecewiseLinearModel
from compromise.model.costs import QuadraticCost
from compromise.model.types import FeasibleRegion, Matrix, SampleSet, StochasticProgram, Vector

CompromiseFlavor = Literal["exact", "inexact", "algorithm-augmented", "sd-augmented"]


@dataclass(frozen=True, eq=False)
class SaaInstance:
    """The sample average ``f_n(x) = (1/n) sum_j F(x, xi_j)`` of one replication.

    Every evaluation goes back to the stored samples, so ``f_n`` never
    drifts from its definition.

    Attributes:
        problem: Stochastic program the samples come from.
        samples: The replication's draws.

    Example:
        >>> inst = build_saa(quad2(), SampleSet(np.array([[0.0, 0.0], [1.0, 1.0]]), 0, 0))
        >>> inst.value(np.array([0.5, 0.5]))
        0.25
    """

    problem: StochasticProgram
    samples: SampleSet

    @property
    def region(self) -> FeasibleRegion:
        return self.problem.region

    @property
    def size(self) -> int:
        return self.samples.size

    def scenario_values(self, x: Vector) -> Vector:
        """``F(x, xi_j)`` for every sample."""
        return np.asarray(self.problem.cost.values(x, self.samples.realizations))

    def value(self, x: Vector) -> float:
        return float(np.mean(self.scenario_values(x)))

    def subgradient(self, x: Vector) -> Vector:
        return np.asarray(self.problem.cost.subgradients(x, self.samples.realizations)).mean(axis=0)

    def quadratic_coefficients(self) -> tuple[Matrix, Vector, float] | None:
        """``(Q, c, const)`` of ``f_n`` when the cost is quadratic, else ``None``."""
        cost = self.problem.cost
        if isinstance(cost, QuadraticCost):
            return cost.sample_average(self.samples.realizations)
        return None


@dataclass(frozen=True, eq=False)
class ReplicationResult:
    """Solution of one replication.

    Attributes:
        point: ``x_n``, the estimated solution.
        value: ``theta_n`` (a lower bound on it for cutting-plane solves).
        epsilon: Optimality tolerance the solve guarantees.
        objective: ``f_n(x_n)``.
        model: Outer approximation when the cutting-plane path was used.
        iterations: Solver iterations.
        sample_id: Identifier of the replication's sample set.
    """

    point: Vector
    value: float
    epsilon: float
    objective: float
    model: PiecewiseLinearModel | None = None
    iterations: int = 0
    sample_id: str = ""


@dataclass(frozen=True, eq=False)
class CompromiseResult:
    """Solution of a regularized compromise problem.

    Attributes:
        point: Compromise decision ``x_c``.
        anchor: Average decision ``x_bar``.
        value: Master objective at ``x_c``, prox term included.
        flavor: Which compromise problem was solved.
        rho: Prox weight.
        epsilon: Inexactness of the anchor inputs.
        kkt_residual: Residual of the final master solve.
    """

    point: Vector
    anchor: Vector
    value: float
    flavor: CompromiseFlavor
    rho: float
    epsilon: float = 0.0
    kkt_residual: float = 0.0
    metadata: dict[str, float] = field(default_factory=dict)

    @property
    def gap(self) -> float:
        """``||x_bar - x_c||``."""
        return float(np.linalg.norm(self.anchor - self.point))
