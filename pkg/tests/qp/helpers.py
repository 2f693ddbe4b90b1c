"""Reference solvers and oracles for QP kernel tests."""

import itertools
from dataclasses import dataclass

import numpy as np

from compromise.model.types import FeasibleRegion, Vector
from compromise.qp import NonnegQP


def exhaustive_nonneg_qp(qp: NonnegQP, tol: float = 1e-9) -> tuple[Vector, float]:
    """Best KKT point over every active set; exact for positive-definite ``H``."""
    size = qp.q_vector.size
    best: tuple[Vector, float] | None = None
    for free_count in range(size + 1):
        for free in itertools.combinations(range(size), free_count):
            gamma = np.zeros(size)
            if free:
                index = list(free)
                gamma[index] = np.linalg.solve(
                    qp.h_matrix[np.ix_(index, index)], qp.q_vector[index]
                )
            gradient = qp.h_matrix @ gamma - qp.q_vector
            if np.any(gamma < -tol) or np.any(gradient < -tol):
                continue
            value = qp.objective(gamma)
            if best is None or value > best[1]:
                best = (gamma, value)
    assert best is not None
    return best


def random_pd_qp(rng: np.random.Generator, size: int) -> NonnegQP:
    factor = rng.normal(size=(size, size))
    h_matrix = factor @ factor.T + 0.1 * np.eye(size)
    return NonnegQP(h_matrix, rng.normal(size=size))


@dataclass(frozen=True, eq=False)
class HalfSquaredDistance:
    """``x -> 1/2 ||x - target||^2`` as a convex oracle."""

    region: FeasibleRegion
    target: Vector

    def value(self, x: Vector) -> float:
        diff = x - self.target
        return 0.5 * float(diff @ diff)

    def subgradient(self, x: Vector) -> Vector:
        return np.asarray(x - self.target)


@dataclass(frozen=True, eq=False)
class AbsoluteValue:
    """``x -> sum_i |x_i - target_i|``, nonsmooth at the target."""

    region: FeasibleRegion
    target: Vector

    def value(self, x: Vector) -> float:
        return float(np.abs(x - self.target).sum())

    def subgradient(self, x: Vector) -> Vector:
        return np.sign(x - self.target)
