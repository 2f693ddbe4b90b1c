"""Recourse evaluation for two-stage quadratic programs.

The dual route reduces the recourse dual to a nonnegativity-constrained QP
in ``gamma`` only, after maximizing out the equality multipliers in closed
form. The primal route solves the recourse QP directly and serves as a
cross-check.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from compromise.errors import InfeasibleError, ModelError
from compromise.model.types import FeasibleRegion, Matrix, Vector
from compromise.qp import NonnegQP, QpData, dump_qp, solve_nonneg_qp, solve_qp
from compromise.sd.types import DualReduction, RecourseSolution, SqqpProblem

__all__ = [
    "SqqpCost",
    "hessian_bound_m1",
    "lipschitz_constant_lf",
    "reduce_dual",
    "solve_extensive_form",
    "solve_recourse_dual",
    "solve_recourse_primal",
]

_logger = logging.getLogger(__name__)

_DEFAULT_TOLERANCE = 1e-8
_RANK_TOLERANCE = 1e-10


def reduce_dual(problem: SqqpProblem) -> DualReduction:
    """Precompute the reduced recourse dual from an eigendecomposition of ``P``.

    Raises:
        ModelError: If ``D`` does not have full row rank.
    """
    d_matrix = problem.d_matrix
    if np.linalg.matrix_rank(d_matrix, tol=_RANK_TOLERANCE) < d_matrix.shape[0]:
        raise ModelError("dual reduction requires full row rank")
    eigenvalues, eigenvectors = scipy.linalg.eigh(problem.p_matrix)
    p_inverse_sqrt = (eigenvectors / np.sqrt(eigenvalues)) @ eigenvectors.T
    p_inverse = (eigenvectors / eigenvalues) @ eigenvectors.T
    m_matrix = d_matrix @ p_inverse_sqrt
    k_inverse = np.linalg.inv(m_matrix @ m_matrix.T)
    phi = np.eye(problem.n2) - m_matrix.T @ k_inverse @ m_matrix
    h_matrix = p_inverse_sqrt @ phi @ phi @ p_inverse_sqrt
    h_matrix = 0.5 * (h_matrix + h_matrix.T)
    d_vector = problem.d_vector
    return DualReduction(
        m_matrix=m_matrix,
        phi=phi,
        h_matrix=h_matrix,
        constant=-0.5 * float(d_vector @ h_matrix @ d_vector),
        k_inverse=k_inverse,
        p_inverse=p_inverse,
        p_inverse_sqrt=p_inverse_sqrt,
        q_offset=h_matrix @ d_vector,
        q_coupling=p_inverse_sqrt @ m_matrix.T @ k_inverse,
        linear_coupling=k_inverse @ d_matrix @ p_inverse @ d_vector,
        d_vector=d_vector,
        d_matrix=d_matrix,
    )


def recourse_from_gamma(reduction: DualReduction, g: Vector, gamma: Vector) -> RecourseSolution:
    """Dual value, multipliers and primal decision for a fixed ``gamma``."""
    multipliers = reduction.multipliers(g, gamma)
    w = -reduction.d_vector + reduction.d_matrix.T @ multipliers + gamma
    q = reduction.q_of(g)
    value = float(reduction.base_value(g)) + float(
        -0.5 * gamma @ reduction.h_matrix @ gamma + q @ gamma
    )
    return RecourseSolution(
        value=value,
        gamma=gamma,
        multipliers=multipliers,
        decision=reduction.p_inverse @ w,
    )


def solve_recourse_dual(
    problem: SqqpProblem,
    reduction: DualReduction,
    x: Vector,
    xi: Vector,
    tol: float = _DEFAULT_TOLERANCE,
) -> RecourseSolution:
    """Evaluate ``h(x, xi)`` through the reduced dual.

    Raises:
        InfeasibleError: If the dual is unbounded ("recourse infeasible at (x, xi)").
    """
    g = problem.coupling(x, xi)
    qp = NonnegQP(reduction.h_matrix, reduction.q_of(g))
    try:
        solution = solve_nonneg_qp(qp, tol=tol)
    except InfeasibleError as exc:
        _logger.debug("unbounded recourse dual:\n%s", dump_qp(qp))
        raise InfeasibleError(f"recourse infeasible at (x={x}, xi={xi})") from exc
    return recourse_from_gamma(reduction, g, solution.point)


def solve_recourse_primal(
    problem: SqqpProblem, x: Vector, xi: Vector, tol: float = _DEFAULT_TOLERANCE
) -> RecourseSolution:
    """Solve ``min 1/2 y'Py + d'y  s.t.  D y = g, y >= 0`` as a QP."""
    n2 = problem.n2
    data = QpData.build(
        problem.p_matrix,
        problem.d_vector,
        a_eq=problem.d_matrix,
        b_eq=problem.coupling(x, xi),
        c_ineq=-np.eye(n2),
        d_ineq=np.zeros(n2),
    )
    try:
        result = solve_qp(data, tol=tol)
    except InfeasibleError as exc:
        raise InfeasibleError(f"recourse infeasible at (x={x}, xi={xi})") from exc
    # Sign convention of the kernel: grad + D'y_eq - z = 0, so lambda = -y_eq.
    return RecourseSolution(
        value=result.value,
        gamma=result.z,
        multipliers=-result.y,
        decision=result.x,
    )


@dataclass(frozen=True, eq=False)
class SqqpCost:
    """Scenario cost ``1/2 x'Qx + c'x + h(x, xi)`` of a two-stage QP."""

    problem: SqqpProblem
    reduction: DualReduction

    @classmethod
    def of(cls, problem: SqqpProblem) -> "SqqpCost":
        return cls(problem=problem, reduction=reduce_dual(problem))

    def recourse(self, x: Vector, xi: Vector) -> RecourseSolution:
        return solve_recourse_dual(self.problem, self.reduction, x, xi)

    def value(self, x: Vector, xi: Vector) -> float:
        return self.problem.first_stage(x) + self.recourse(x, xi).value

    def subgradient(self, x: Vector, xi: Vector) -> Vector:
        solution = self.recourse(x, xi)
        problem = self.problem
        technology = problem.technology(xi)
        return problem.q_matrix @ x + problem.c_vector - technology.T @ solution.multipliers

    def values(self, x: Vector, scenarios: Matrix) -> Vector:
        return np.array([self.value(x, xi) for xi in scenarios])

    def subgradients(self, x: Vector, scenarios: Matrix) -> Matrix:
        return np.array([self.subgradient(x, xi) for xi in scenarios])

    def extensive_form(
        self, region: FeasibleRegion, atoms: Matrix, probabilities: Vector
    ) -> tuple[Vector, float]:
        return solve_extensive_form(self.problem, atoms, probabilities, region)


def solve_extensive_form(
    problem: SqqpProblem,
    atoms: Matrix | None = None,
    probabilities: Vector | None = None,
    region: FeasibleRegion | None = None,
    tol: float = _DEFAULT_TOLERANCE,
) -> tuple[Vector, float]:
    """Solve the deterministic equivalent over finitely many scenarios.

    Variables are ``x`` followed by one recourse block ``y_s`` per atom.

    Returns:
        ``(x*, optimal value)``.

    Raises:
        ModelError: If the scenario space is not finite.
    """
    space = problem.scenarios
    if atoms is None or probabilities is None:
        if not space.is_finite or space.atoms is None or space.probabilities is None:
            raise ModelError("extensive form requires finite scenarios")
        atoms, probabilities = space.atoms, space.probabilities
    region = problem.region if region is None else region
    n1, n2, m2 = problem.n1, problem.n2, problem.m2
    count = atoms.shape[0]
    size = n1 + count * n2

    g_matrix = np.zeros((size, size))
    g_matrix[:n1, :n1] = problem.q_matrix
    c_vector = np.zeros(size)
    c_vector[:n1] = problem.c_vector
    a_eq = np.zeros((count * m2, size))
    b_eq = np.zeros(count * m2)
    for s, (xi, weight) in enumerate(zip(atoms, probabilities, strict=True)):
        block = slice(n1 + s * n2, n1 + (s + 1) * n2)
        rows = slice(s * m2, (s + 1) * m2)
        g_matrix[block, block] = weight * problem.p_matrix
        c_vector[block] = weight * problem.d_vector
        a_eq[rows, :n1] = problem.technology(xi)
        a_eq[rows, block] = problem.d_matrix
        b_eq[rows] = problem.rhs(xi)

    a_region, b_region = region.inequalities()
    c_ineq = np.zeros((a_region.shape[0] + count * n2, size))
    c_ineq[: a_region.shape[0], :n1] = a_region
    c_ineq[a_region.shape[0] :, n1:] = -np.eye(count * n2)
    d_ineq = np.concatenate([b_region, np.zeros(count * n2)])

    result = solve_qp(QpData.build(g_matrix, c_vector, a_eq, b_eq, c_ineq, d_ineq), tol=tol)
    return result.x[:n1], result.value


def hessian_bound_m1(problem: SqqpProblem) -> float:
    """``||Q|| + max_xi ||T(xi)||`` with spectral norms.

    ``T(xi) = C'K^{-1}C + L' H^+ L`` and ``L = P^{-1/2} M' K^{-1} C``. The
    pseudo-inverse replaces the inverse because ``H`` is singular whenever
    ``m2 >= 1``.

    Raises:
        ModelError: If the scenario space is not finite ("bound requires finite Ξ").
    """
    space = problem.scenarios
    if not space.is_finite or space.atoms is None or space.size == 0:
        raise ModelError("bound requires finite Ξ")
    reduction = reduce_dual(problem)
    h_pinv = np.linalg.pinv(reduction.h_matrix, rcond=1e-10, hermitian=True)
    worst = 0.0
    for xi in space.atoms:
        technology = problem.technology(xi)
        lifted = reduction.q_coupling @ technology
        t_matrix = technology.T @ reduction.k_inverse @ technology + lifted.T @ h_pinv @ lifted
        worst = max(worst, float(np.linalg.norm(t_matrix, 2)))
    return float(np.linalg.norm(problem.q_matrix, 2)) + worst


def lipschitz_constant_lf(
    problem: SqqpProblem, recourse_lipschitz: float, declared: float | None = None
) -> float:
    """``L_f = max_X ||Qx|| + ||c|| + L_h``, maximized over box vertices.

    Raises:
        ModelError: For non-box regions without a declared value.
    """
    if declared is not None:
        return float(declared)
    region = problem.region
    if region.kind != "box":
        raise ModelError("L_f requires a box region or a declared value")
    corners = np.array(np.meshgrid(*zip(region.lower, region.upper, strict=True), indexing="ij"))
    vertices = corners.reshape(region.dimension, -1).T
    largest = float(np.max(np.linalg.norm(vertices @ problem.q_matrix.T, axis=1)))
    return largest + float(np.linalg.norm(problem.c_vector)) + recourse_lipschitz
