"""Data types for the dense convex QP kernel."""

from dataclasses import dataclass, field

import numpy as np

from compromise.errors import ModelError
from compromise.model.types import FeasibleRegion, Matrix, Vector

# --- Validation tolerances ---------------------------------------------------

_SYMMETRY_TOLERANCE = 1e-10
_PSD_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class NonnegQP:
    """``max_{gamma >= 0} -1/2 gamma'H gamma + q'gamma + c0`` with ``H`` PSD.

    ``H`` may be singular; the solver then works in its range space.

    Attributes:
        h_matrix: Symmetric positive-semidefinite ``(k, k)`` matrix.
        q_vector: Linear coefficients.
        constant: Constant shift ``c0`` added to the value.

    Example:
        >>> qp = NonnegQP(np.eye(2), np.array([1.0, -1.0]))
        >>> solve_nonneg_qp(qp).point
        array([1., 0.])
    """

    h_matrix: Matrix
    q_vector: Vector
    constant: float = 0.0

    def __post_init__(self) -> None:
        h = self.h_matrix
        if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] != self.q_vector.size:
            raise ModelError("NonnegQP dimensions do not match")
        if not np.allclose(h, h.T, rtol=0.0, atol=_SYMMETRY_TOLERANCE):
            raise ModelError("NonnegQP matrix must be symmetric")
        if h.size and float(np.linalg.eigvalsh(0.5 * (h + h.T)).min()) < -_PSD_TOLERANCE:
            raise ModelError("NonnegQP matrix must be positive semidefinite")

    def objective(self, gamma: Vector) -> float:
        return float(-0.5 * gamma @ self.h_matrix @ gamma + self.q_vector @ gamma + self.constant)


@dataclass(frozen=True, eq=False)
class CutGroup:
    """Affine pieces ``alpha_l + <beta_l, x>`` whose maximum enters with ``weight``.

    A master problem sums one maximum per group, so the average of ``m``
    piecewise-linear models is ``m`` groups of weight ``1/m``.
    """

    weight: float
    intercepts: Vector
    slopes: Matrix

    @property
    def size(self) -> int:
        return int(self.intercepts.size)

    def evaluate(self, x: Vector) -> float:
        return float(np.max(self.intercepts + self.slopes @ x))


@dataclass(frozen=True, eq=False)
class ProxMaster:
    """Prox-regularized piecewise-linear master problem.

    Minimizes ``sum_g w_g max_l(alpha_l + <beta_l, x>) + 1/2 x'Qx + c'x +
    constant + rho/2 ||x - anchor||^2`` over the region.

    Attributes:
        groups: Cut groups; may be empty.
        region: Feasible region.
        rho: Positive prox weight.
        anchor: Prox centre; may lie outside the region.
        q_matrix: Optional PSD first-stage Hessian.
        c_vector: Optional first-stage linear term.
        constant: Constant added to the objective.
    """

    groups: tuple[CutGroup, ...]
    region: FeasibleRegion
    rho: float
    anchor: Vector
    q_matrix: Matrix | None = None
    c_vector: Vector | None = None
    constant: float = 0.0

    def __post_init__(self) -> None:
        if not self.rho > 0.0:
            raise ModelError("prox weight must be positive")
        if self.anchor.shape != (self.region.dimension,):
            raise ModelError("anchor dimension does not match region")

    @classmethod
    def from_cuts(
        cls,
        intercepts: Vector,
        slopes: Matrix,
        region: FeasibleRegion,
        rho: float,
        anchor: Vector,
    ) -> "ProxMaster":
        """Master over a single cut collection of weight one."""
        group = CutGroup(1.0, np.asarray(intercepts, dtype=np.float64), np.atleast_2d(slopes))
        return cls(groups=(group,), region=region, rho=rho, anchor=anchor)

    def model_value(self, x: Vector) -> float:
        """Objective without the prox term."""
        total = self.constant + sum(g.weight * g.evaluate(x) for g in self.groups if g.size)
        if self.q_matrix is not None:
            total += 0.5 * float(x @ self.q_matrix @ x)
        if self.c_vector is not None:
            total += float(self.c_vector @ x)
        return float(total)

    def objective(self, x: Vector) -> float:
        diff = x - self.anchor
        return self.model_value(x) + 0.5 * self.rho * float(diff @ diff)


@dataclass(frozen=True, eq=False)
class QpSolution:
    """Solution returned by every kernel entry point.

    Attributes:
        point: Minimizer (or maximizer for ``NonnegQP``).
        value: Objective value at ``point``.
        kkt_residual: Scaled KKT residual, at most the solver tolerance.
        iterations: Iterations spent.
        multipliers: Inequality multipliers; for masters, one per cut in
            group order.
    """

    point: Vector
    value: float
    kkt_residual: float
    iterations: int
    multipliers: Vector = field(default_factory=lambda: np.zeros(0))
