"""Primal active-set method for nonnegativity-constrained concave QP maximization.

The kernel solves ``max_{gamma >= 0} -1/2 gamma'H gamma + q'gamma + c0`` by
minimizing ``phi(gamma) = 1/2 gamma'H gamma - q'gamma``. Subspace steps use
least squares, which gives pseudo-inverse steps when ``H`` is singular. When
the free-subspace system is inconsistent, ``phi`` decreases without bound
along a null-space direction; the ratio test either finds a blocking bound
or proves the problem unbounded.
"""

import logging

import numpy as np

from compromise.errors import InfeasibleError, SolverError
from compromise.model.types import Vector
from compromise.qp.types import NonnegQP, QpSolution

__all__ = ["solve_nonneg_qp"]

_logger = logging.getLogger(__name__)

_DEFAULT_TOLERANCE = 1e-8
_CONSISTENCY_TOLERANCE = 1e-10
_ZERO = 1e-14


def _kkt_residual(qp: NonnegQP, gamma: Vector) -> float:
    """Natural residual ``||min(gamma, grad)||_inf`` scaled by the data size."""
    gradient = qp.h_matrix @ gamma - qp.q_vector
    residual = float(np.max(np.abs(np.minimum(gamma, gradient)), initial=0.0))
    return residual / (1.0 + float(np.max(np.abs(qp.q_vector), initial=0.0)))


def _ratio_step(gamma_free: Vector, direction: Vector) -> tuple[float, int]:
    """Largest step keeping ``gamma_free + t * direction >= 0``."""
    decreasing = direction < -_ZERO
    if not np.any(decreasing):
        return np.inf, -1
    ratios = np.full(direction.size, np.inf)
    ratios[decreasing] = gamma_free[decreasing] / -direction[decreasing]
    blocking = int(np.argmin(ratios))
    return float(max(ratios[blocking], 0.0)), blocking


def solve_nonneg_qp(
    qp: NonnegQP, tol: float = _DEFAULT_TOLERANCE, initial: Vector | None = None
) -> QpSolution:
    """Maximize ``-1/2 gamma'H gamma + q'gamma + c0`` over ``gamma >= 0``.

    Args:
        qp: Problem data.
        tol: KKT tolerance on the returned point.
        initial: Optional starting point, projected onto ``gamma >= 0``.

    Returns:
        QpSolution whose ``multipliers`` hold the bound multipliers
        ``max(H gamma - q, 0)`` on the active set.

    Raises:
        InfeasibleError: If the objective is unbounded above.
        SolverError: If the iteration cap is reached or the KKT residual
            exceeds ``tol``.
    """
    h_matrix, q_vector = qp.h_matrix, qp.q_vector
    size = q_vector.size
    if size == 0:
        return QpSolution(point=np.zeros(0), value=qp.constant, kkt_residual=0.0, iterations=0)

    gamma = np.zeros(size) if initial is None else np.maximum(np.asarray(initial, float), 0.0)
    fixed = gamma <= 0.0
    gamma[fixed] = 0.0
    scale = 1.0 + float(np.max(np.abs(q_vector)))
    max_iterations = 50 * size + 100

    for iteration in range(1, max_iterations + 1):
        free = ~fixed
        gradient = h_matrix @ gamma - q_vector
        if np.any(free):
            h_free = h_matrix[np.ix_(free, free)]
            g_free = gradient[free]
            step, *_ = np.linalg.lstsq(h_free, -g_free, rcond=None)
            null_part = g_free + h_free @ step
            if np.linalg.norm(null_part) > _CONSISTENCY_TOLERANCE * scale:
                direction = -null_part
                length, blocking = _ratio_step(gamma[free], direction)
                if not np.isfinite(length):
                    raise InfeasibleError("recourse dual unbounded (primal infeasible)")
                free_index = np.flatnonzero(free)
                gamma[free] = gamma[free] + length * direction
                gamma[free_index[blocking]] = 0.0
                fixed[free_index[blocking]] = True
                continue
            if np.linalg.norm(step) > _ZERO:
                length, blocking = _ratio_step(gamma[free], step)
                if length < 1.0:
                    free_index = np.flatnonzero(free)
                    gamma[free] = gamma[free] + length * step
                    gamma[free_index[blocking]] = 0.0
                    fixed[free_index[blocking]] = True
                    continue
                gamma[free] = gamma[free] + step
                gradient = h_matrix @ gamma - q_vector

        gamma = np.maximum(gamma, 0.0)
        if not np.any(fixed):
            break
        fixed_gradient = np.where(fixed, gradient, np.inf)
        release = int(np.argmin(fixed_gradient))
        if fixed_gradient[release] >= -tol * scale:
            break
        fixed[release] = False
    else:
        raise SolverError("active-set iteration limit reached", problem=qp)

    gradient = h_matrix @ gamma - q_vector
    residual = _kkt_residual(qp, gamma)
    if residual > tol:
        raise SolverError(
            f"nonneg QP residual {residual:.2e} above tolerance {tol:.0e}", problem=qp
        )
    _logger.debug("nonneg QP solved in %d iterations, residual %.2e", iteration, residual)
    return QpSolution(
        point=gamma,
        value=qp.objective(gamma),
        kkt_residual=residual,
        iterations=iteration,
        multipliers=np.where(fixed, np.maximum(gradient, 0.0), 0.0),
    )
