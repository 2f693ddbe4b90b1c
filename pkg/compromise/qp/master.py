"""Epigraph master problems over piecewise-linear models."""

import logging
from collections.abc import Sequence

import numpy as np
from scipy.optimize import linprog

from compromise.errors import InfeasibleError, SolverError
from compromise.model.types import FeasibleRegion, Matrix, Vector
from compromise.qp.interior_point import QpData, solve_qp
from compromise.qp.types import CutGroup, ProxMaster, QpSolution

__all__ = [
    "minimize_cut_model",
    "project_onto_region",
    "solve_lp_master",
    "solve_prox_master",
]

_logger = logging.getLogger(__name__)

_DEFAULT_TOLERANCE = 1e-8


def _epigraph_data(
    groups: Sequence[CutGroup],
    region: FeasibleRegion,
    hessian: Matrix,
    linear: Vector,
) -> tuple[QpData, list[CutGroup]]:
    """Variables ``(x, t_1, ..., t_G)`` with ``alpha + beta'x <= t_g`` rows."""
    active = [g for g in groups if g.size]
    p = region.dimension
    count = len(active)
    g_matrix = np.zeros((p + count, p + count))
    g_matrix[:p, :p] = hessian
    c_vector = np.concatenate([linear, [g.weight for g in active]])

    rows = []
    rhs = []
    for index, group in enumerate(active):
        block = np.zeros((group.size, p + count))
        block[:, :p] = group.slopes
        block[:, p + index] = -1.0
        rows.append(block)
        rhs.append(-group.intercepts)
    a_region, b_region = region.inequalities()
    rows.append(np.hstack([a_region, np.zeros((a_region.shape[0], count))]))
    rhs.append(b_region)
    data = QpData.build(g_matrix, c_vector, c_ineq=np.vstack(rows), d_ineq=np.concatenate(rhs))
    return data, active


def _solve_epigraph(
    groups: Sequence[CutGroup],
    region: FeasibleRegion,
    hessian: Matrix,
    linear: Vector,
    tol: float,
) -> tuple[Vector, float, Vector, int]:
    data, active = _epigraph_data(groups, region, hessian, linear)
    p = region.dimension
    result = solve_qp(data, tol=tol)
    cut_count = sum(g.size for g in active)
    return result.x[:p], result.kkt_residual, result.z[:cut_count], result.iterations


def solve_prox_master(master: ProxMaster, tol: float = _DEFAULT_TOLERANCE) -> QpSolution:
    """Minimize a prox-regularized piecewise-linear model over the region.

    The cut maxima are moved to epigraph variables, one per group, so the
    master becomes a single convex QP.

    Args:
        master: Problem data; ``rho > 0``.
        tol: Scaled KKT tolerance.

    Returns:
        QpSolution with the minimizer, the full objective including the prox
        term, and one multiplier per cut in group order.

    Raises:
        InfeasibleError: If the region is empty ("infeasible master").
        SolverError: If the QP misses its tolerance. The error carries
            ``master`` for dumps.
    """
    p = master.region.dimension
    hessian = master.rho * np.eye(p)
    linear = -master.rho * master.anchor
    if master.q_matrix is not None:
        hessian = hessian + master.q_matrix
    if master.c_vector is not None:
        linear = linear + master.c_vector
    try:
        x, residual, multipliers, iterations = _solve_epigraph(
            master.groups, master.region, hessian, linear, tol
        )
    except InfeasibleError as exc:
        raise InfeasibleError("infeasible master", problem=master) from exc
    except SolverError as exc:
        raise SolverError(str(exc), problem=master) from exc
    return QpSolution(
        point=x,
        value=master.objective(x),
        kkt_residual=residual,
        iterations=iterations,
        multipliers=multipliers,
    )


def minimize_cut_model(
    groups: Sequence[CutGroup],
    region: FeasibleRegion,
    q_matrix: Matrix | None = None,
    c_vector: Vector | None = None,
    constant: float = 0.0,
    tol: float = _DEFAULT_TOLERANCE,
) -> QpSolution:
    """Minimize ``sum_g w_g max(cuts_g) + 1/2 x'Qx + c'x + constant`` without a prox term.

    Well posed because regions are bounded. With no groups this is the
    direct solve of a quadratic SAA objective.
    """
    p = region.dimension
    hessian = np.zeros((p, p)) if q_matrix is None else q_matrix
    linear = np.zeros(p) if c_vector is None else c_vector
    x, residual, multipliers, iterations = _solve_epigraph(
        groups, region, hessian, linear, tol
    )
    value = constant + 0.5 * float(x @ hessian @ x) + float(linear @ x)
    value += sum(g.weight * g.evaluate(x) for g in groups if g.size)
    return QpSolution(
        point=x, value=value, kkt_residual=residual, iterations=iterations,
        multipliers=multipliers,
    )


def project_onto_region(x: Vector, region: FeasibleRegion) -> Vector:
    """Euclidean projection onto the region.

    Boxes clamp componentwise; polyhedra solve a master with no cuts.

    Raises:
        InfeasibleError: If the polyhedron is empty ("infeasible region").
    """
    point = np.asarray(x, dtype=np.float64)
    if region.kind == "box":
        return np.clip(point, region.lower, region.upper)
    try:
        solution = solve_prox_master(ProxMaster(groups=(), region=region, rho=1.0, anchor=point))
    except InfeasibleError as exc:
        raise InfeasibleError("infeasible region") from exc
    return solution.point


def solve_lp_master(groups: Sequence[CutGroup], region: FeasibleRegion) -> QpSolution:
    """Minimize ``sum_g w_g max(cuts_g)`` over the region with HiGHS.

    This is the unregularized Kelley master. Every group must hold a cut.

    Raises:
        InfeasibleError: If the LP is infeasible.
        SolverError: If HiGHS reports any other failure.
    """
    if not groups or any(g.size == 0 for g in groups):
        raise SolverError("Kelley master needs at least one cut per group")
    p = region.dimension
    count = len(groups)
    cost = np.concatenate([np.zeros(p), [g.weight for g in groups]])
    rows = []
    rhs = []
    for index, group in enumerate(groups):
        block = np.zeros((group.size, p + count))
        block[:, :p] = group.slopes
        block[:, p + index] = -1.0
        rows.append(block)
        rhs.append(-group.intercepts)
    a_region, b_region = region.inequalities()
    rows.append(np.hstack([a_region, np.zeros((a_region.shape[0], count))]))
    rhs.append(b_region)
    a_ub = np.vstack(rows)
    b_ub = np.concatenate(rhs)
    result = linprog(
        cost, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * (p + count), method="highs"
    )
    if result.status == 2:
        raise InfeasibleError("infeasible master")
    if result.status != 0:
        raise SolverError(f"Kelley master failed: {result.message}")
    x = np.asarray(result.x[:p], dtype=np.float64)
    value = float(sum(g.weight * g.evaluate(x) for g in groups))
    violation = float(np.max(a_region @ x - b_region, initial=0.0))
    multipliers = -np.asarray(result.ineqlin.marginals, dtype=np.float64)
    cut_count = sum(g.size for g in groups)
    _logger.debug("Kelley master value %.10g", value)
    return QpSolution(
        point=x,
        value=value,
        kkt_residual=max(violation, 0.0),
        iterations=int(result.nit),
        multipliers=multipliers[:cut_count],
    )
