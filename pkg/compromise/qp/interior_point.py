"""Dense primal-dual interior-point method for convex QPs.

Solves ``min 1/2 x'Gx + c'x  s.t.  A x = b,  C x <= d`` with ``G`` PSD using
Mehrotra's predictor-corrector on the reduced normal equations. The
interior-point iterate is then polished by one equality-constrained KKT
solve on the constraints it identifies as active, which brings the KKT
residual down to round-off on the small dense problems this package builds.
"""

import logging
from dataclasses import dataclass

import numpy as np

from compromise.errors import InfeasibleError, SolverError
from compromise.model.types import Matrix, Vector

__all__ = ["QpData", "QpResult", "solve_qp"]

_logger = logging.getLogger(__name__)

# --- Iteration controls ------------------------------------------------------

_DEFAULT_TOLERANCE = 1e-8
_MAX_ITERATIONS = 200
_STEP_FRACTION = 0.995
_DIVERGENCE_NORM = 1e12


@dataclass(frozen=True, eq=False)
class QpData:
    """Dense QP data. Empty constraint blocks are ``(0, n)`` arrays."""

    g_matrix: Matrix
    c_vector: Vector
    a_eq: Matrix
    b_eq: Vector
    c_ineq: Matrix
    d_ineq: Vector

    @classmethod
    def build(
        cls,
        g_matrix: Matrix,
        c_vector: Vector,
        a_eq: Matrix | None = None,
        b_eq: Vector | None = None,
        c_ineq: Matrix | None = None,
        d_ineq: Vector | None = None,
    ) -> "QpData":
        n = c_vector.size
        return cls(
            g_matrix=np.asarray(g_matrix, dtype=np.float64),
            c_vector=np.asarray(c_vector, dtype=np.float64),
            a_eq=np.zeros((0, n)) if a_eq is None else np.atleast_2d(a_eq).astype(np.float64),
            b_eq=np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=np.float64),
            c_ineq=np.zeros((0, n)) if c_ineq is None else np.atleast_2d(c_ineq).astype(np.float64),
            d_ineq=np.zeros(0) if d_ineq is None else np.asarray(d_ineq, dtype=np.float64),
        )

    def objective(self, x: Vector) -> float:
        return float(0.5 * x @ self.g_matrix @ x + self.c_vector @ x)

    @property
    def scale(self) -> float:
        """Magnitude of the data used to scale residuals."""
        parts = [self.c_vector, self.b_eq, self.d_ineq, self.g_matrix.reshape(-1)]
        return 1.0 + max(float(np.max(np.abs(p), initial=0.0)) for p in parts)


@dataclass(frozen=True, eq=False)
class QpResult:
    """Primal-dual solution of a :class:`QpData` problem."""

    x: Vector
    y: Vector
    z: Vector
    value: float
    kkt_residual: float
    iterations: int


def _residual(data: QpData, x: Vector, y: Vector, z: Vector) -> float:
    slack = data.d_ineq - data.c_ineq @ x
    parts = [
        data.g_matrix @ x + data.c_vector + data.a_eq.T @ y + data.c_ineq.T @ z,
        data.a_eq @ x - data.b_eq,
        np.maximum(-slack, 0.0),
        np.maximum(-z, 0.0),
        z * slack,
    ]
    worst = max(float(np.max(np.abs(p), initial=0.0)) for p in parts)
    return worst / data.scale


def _kkt_solve(data: QpData, active: Vector) -> tuple[Vector, Vector, Vector] | None:
    """Solve the equality-constrained QP with ``active`` inequalities tight."""
    n = data.c_vector.size
    meq = data.b_eq.size
    c_active = data.c_ineq[active]
    rows = meq + c_active.shape[0]
    kkt = np.zeros((n + rows, n + rows))
    kkt[:n, :n] = data.g_matrix
    constraint = np.vstack([data.a_eq, c_active])
    kkt[:n, n:] = constraint.T
    kkt[n:, :n] = constraint
    rhs = np.concatenate([-data.c_vector, data.b_eq, data.d_ineq[active]])
    solution, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
    if not np.all(np.isfinite(solution)):
        return None
    x = solution[:n]
    y = solution[n : n + meq]
    z = np.zeros(data.d_ineq.size)
    z[active] = solution[n + meq :]
    return x, y, z


def _max_step(values: Vector, deltas: Vector) -> float:
    negative = deltas < 0.0
    if not np.any(negative):
        return 1.0
    return float(min(1.0, np.min(-values[negative] / deltas[negative])))


def _newton_direction(
    data: QpData,
    s: Vector,
    z: Vector,
    r_dual: Vector,
    r_eq: Vector,
    r_ineq: Vector,
    r_comp: Vector,
) -> tuple[Vector, Vector, Vector, Vector]:
    """Solve the reduced Newton system for ``(dx, dy, ds, dz)``."""
    n = data.c_vector.size
    meq = data.b_eq.size
    weights = z / s
    lhs = np.zeros((n + meq, n + meq))
    lhs[:n, :n] = data.g_matrix + data.c_ineq.T @ (weights[:, None] * data.c_ineq)
    lhs[:n, n:] = data.a_eq.T
    lhs[n:, :n] = data.a_eq
    top = -r_dual - data.c_ineq.T @ ((-r_comp + z * r_ineq) / s)
    rhs = np.concatenate([top, -r_eq])
    solution, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    dx = solution[:n]
    dy = solution[n:]
    ds = -r_ineq - data.c_ineq @ dx
    dz = (-r_comp - z * ds) / s
    return dx, dy, ds, dz


def _interior_point(data: QpData, tol: float, x0: Vector | None) -> QpResult:
    n = data.c_vector.size
    mi = data.d_ineq.size
    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=np.float64).copy()
    y = np.zeros(data.b_eq.size)
    s = np.maximum(data.d_ineq - data.c_ineq @ x, 1.0)
    z = np.ones(mi)
    scale = data.scale

    for iteration in range(1, _MAX_ITERATIONS + 1):
        r_dual = data.g_matrix @ x + data.c_vector + data.a_eq.T @ y + data.c_ineq.T @ z
        r_eq = data.a_eq @ x - data.b_eq
        r_ineq = data.c_ineq @ x + s - data.d_ineq
        mu = float(s @ z) / mi
        primal = max(
            float(np.max(np.abs(r_eq), initial=0.0)), float(np.max(np.abs(r_ineq), initial=0.0))
        )
        dual = float(np.max(np.abs(r_dual), initial=0.0))
        if max(primal, dual, mu) <= 0.01 * tol * scale:
            break
        if float(np.max(np.abs(x), initial=0.0)) > _DIVERGENCE_NORM or float(
            np.max(z, initial=0.0)
        ) > _DIVERGENCE_NORM:
            raise InfeasibleError("infeasible master")

        affine = _newton_direction(data, s, z, r_dual, r_eq, r_ineq, s * z)
        alpha_affine = min(_max_step(s, affine[2]), _max_step(z, affine[3]))
        mu_affine = float((s + alpha_affine * affine[2]) @ (z + alpha_affine * affine[3])) / mi
        sigma = (mu_affine / mu) ** 3 if mu > 0.0 else 0.0
        r_comp = s * z + affine[2] * affine[3] - sigma * mu
        dx, dy, ds, dz = _newton_direction(data, s, z, r_dual, r_eq, r_ineq, r_comp)
        alpha = _STEP_FRACTION * min(_max_step(s, ds), _max_step(z, dz))
        x = x + alpha * dx
        y = y + alpha * dy
        s = np.maximum(s + alpha * ds, 1e-300)
        z = np.maximum(z + alpha * dz, 1e-300)
    else:
        r_eq = data.a_eq @ x - data.b_eq
        violation = max(
            float(np.max(np.abs(r_eq), initial=0.0)),
            float(np.max(data.c_ineq @ x - data.d_ineq, initial=0.0)),
        )
        if violation > 1e-6 * scale:
            raise InfeasibleError("infeasible master")
        _logger.debug("interior point hit the iteration cap; polishing")

    return QpResult(
        x=x, y=y, z=z, value=data.objective(x), kkt_residual=_residual(data, x, y, z),
        iterations=iteration,
    )


def _polish(data: QpData, result: QpResult) -> QpResult:
    slack = data.d_ineq - data.c_ineq @ result.x
    active = result.z > slack
    solved = _kkt_solve(data, active)
    if solved is None:
        return result
    x, y, z = solved
    residual = _residual(data, x, y, z)
    if residual >= result.kkt_residual:
        return result
    return QpResult(
        x=x, y=y, z=z, value=data.objective(x), kkt_residual=residual,
        iterations=result.iterations,
    )


def solve_qp(data: QpData, tol: float = _DEFAULT_TOLERANCE, x0: Vector | None = None) -> QpResult:
    """Solve a dense convex QP to a scaled KKT residual of at most ``tol``.

    Args:
        data: Problem data with ``G`` PSD.
        tol: Scaled KKT tolerance.
        x0: Optional initial primal point.

    Returns:
        QpResult with primal point and equality/inequality multipliers.

    Raises:
        InfeasibleError: If the constraints are inconsistent or the iterates
            diverge.
        SolverError: If the polished point still misses the tolerance.
    """
    if data.d_ineq.size == 0:
        solved = _kkt_solve(data, np.zeros(0, dtype=bool))
        if solved is None:
            raise SolverError("equality-constrained QP has no solution")
        x, y, z = solved
        if float(np.max(np.abs(data.a_eq @ x - data.b_eq), initial=0.0)) > 1e-8 * data.scale:
            raise InfeasibleError("infeasible master")
        result = QpResult(
            x=x, y=y, z=z, value=data.objective(x), kkt_residual=_residual(data, x, y, z),
            iterations=1,
        )
    else:
        result = _polish(data, _interior_point(data, tol, x0))
    if result.kkt_residual > tol:
        raise SolverError(f"QP residual {result.kkt_residual:.2e} above tolerance {tol:.0e}")
    return result
