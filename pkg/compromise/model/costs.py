"""Scenario cost families for oracle-convex programs."""

from dataclasses import dataclass

import numpy as np

from compromise.model.types import Matrix, Vector

__all__ = [
    "NewsvendorCost",
    "QuadraticCost",
    "linear_cost",
    "squared_distance_cost",
]


@dataclass(frozen=True, eq=False)
class QuadraticCost:
    """``F(x, xi) = 1/2 x'Qx + (c + L xi)'x + 1/2 xi'R xi`` with ``Q`` PSD.

    Squared distances (``Q = I, c = 0, L = -I, R = I``) and bilinear costs
    (``Q = 0, L = I, R = 0``) are both instances. Averages of quadratic costs
    over a sample stay quadratic, which lets SAA problems be solved directly.

    Attributes:
        q_matrix: ``(p, p)`` PSD Hessian.
        c_vector: ``(p,)`` constant linear term.
        l_matrix: ``(p, d)`` scenario coupling.
        r_matrix: ``(d, d)`` scenario-only quadratic.
    """

    q_matrix: Matrix
    c_vector: Vector
    l_matrix: Matrix
    r_matrix: Matrix

    def value(self, x: Vector, xi: Vector) -> float:
        linear = self.c_vector + self.l_matrix @ xi
        return float(0.5 * x @ self.q_matrix @ x + linear @ x + 0.5 * xi @ self.r_matrix @ xi)

    def subgradient(self, x: Vector, xi: Vector) -> Vector:
        return self.q_matrix @ x + self.c_vector + self.l_matrix @ xi

    def values(self, x: Vector, scenarios: Matrix) -> Vector:
        linear = self.c_vector + scenarios @ self.l_matrix.T
        scenario_part = 0.5 * np.einsum("ij,jk,ik->i", scenarios, self.r_matrix, scenarios)
        return 0.5 * float(x @ self.q_matrix @ x) + linear @ x + scenario_part

    def subgradients(self, x: Vector, scenarios: Matrix) -> Matrix:
        return (self.q_matrix @ x + self.c_vector) + scenarios @ self.l_matrix.T

    def sample_average(self, scenarios: Matrix) -> tuple[Matrix, Vector, float]:
        """Return ``(Q, c, const)`` with ``mean_i F(x, xi_i) = 1/2 x'Qx + c'x + const``."""
        c_bar = self.c_vector + self.l_matrix @ scenarios.mean(axis=0)
        const = 0.5 * float(
            np.mean(np.einsum("ij,jk,ik->i", scenarios, self.r_matrix, scenarios))
        )
        return self.q_matrix, c_bar, const

    def weighted_average(
        self, scenarios: Matrix, weights: Vector
    ) -> tuple[Matrix, Vector, float]:
        """Probability-weighted version of :meth:`sample_average`."""
        c_bar = self.c_vector + self.l_matrix @ (weights @ scenarios)
        const = 0.5 * float(
            weights @ np.einsum("ij,jk,ik->i", scenarios, self.r_matrix, scenarios)
        )
        return self.q_matrix, c_bar, const


@dataclass(frozen=True, eq=False)
class NewsvendorCost:
    """Separable piecewise-linear cost ``sum_i h_i (x_i - xi_i)^+ + b_i (xi_i - x_i)^+``.

    Nonsmooth at ``x = xi``, so it is only reachable through cutting planes.
    """

    holding: Vector
    backorder: Vector

    def value(self, x: Vector, xi: Vector) -> float:
        excess = x - xi
        return float(
            self.holding @ np.maximum(excess, 0.0) + self.backorder @ np.maximum(-excess, 0.0)
        )

    def subgradient(self, x: Vector, xi: Vector) -> Vector:
        return np.where(x >= xi, self.holding, -self.backorder)

    def values(self, x: Vector, scenarios: Matrix) -> Vector:
        excess = x[None, :] - scenarios
        return np.maximum(excess, 0.0) @ self.holding + np.maximum(-excess, 0.0) @ self.backorder

    def subgradients(self, x: Vector, scenarios: Matrix) -> Matrix:
        return np.where(x[None, :] >= scenarios, self.holding, -self.backorder)


def squared_distance_cost(dimension: int) -> QuadraticCost:
    """``F(x, xi) = 1/2 ||x - xi||^2``."""
    eye = np.eye(dimension)
    return QuadraticCost(
        q_matrix=eye, c_vector=np.zeros(dimension), l_matrix=-eye, r_matrix=eye.copy()
    )


def linear_cost(dimension: int) -> QuadraticCost:
    """``F(x, xi) = <xi, x>``."""
    zeros = np.zeros((dimension, dimension))
    return QuadraticCost(
        q_matrix=zeros,
        c_vector=np.zeros(dimension),
        l_matrix=np.eye(dimension),
        r_matrix=zeros.copy(),
    )
