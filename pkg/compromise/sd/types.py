"""Data types for two-stage quadratic programs and Stochastic Decomposition."""

from dataclasses import dataclass, field

import numpy as np

from compromise.errors import ModelError
from compromise.model.types import FeasibleRegion, Matrix, ScenarioSpace, Vector


@dataclass(frozen=True, eq=False)
class SqqpProblem:
    """Two-stage stochastic QP with quadratic recourse.

    First stage: ``min_{x in X} 1/2 x'Qx + c'x + E[h(x, xi)]``. Recourse:
    ``h(x, xi) = min_{y >= 0} 1/2 y'Py + d'y  s.t.  D y = e(xi) - C(xi) x``.

    A scenario vector stacks ``e`` (length ``m2``) and ``C`` flattened row
    by row (``m2 * n1`` entries).

    Attributes:
        q_matrix: Positive-definite first-stage Hessian ``Q``.
        c_vector: First-stage linear term ``c``.
        region: First-stage feasible region (``A x <= b`` or a box).
        p_matrix: Positive-definite recourse Hessian ``P``.
        d_vector: Recourse linear term ``d``.
        d_matrix: ``(m2, n2)`` recourse matrix ``D``.
        scenarios: Scenario space of ``xi``.

    Example:
        >>> problem = sqqp2().problem
        >>> problem.technology(problem.scenarios.atoms[0]).shape
        (1, 2)
    """

    q_matrix: Matrix
    c_vector: Vector
    region: FeasibleRegion
    p_matrix: Matrix
    d_vector: Vector
    d_matrix: Matrix
    scenarios: ScenarioSpace

    def __post_init__(self) -> None:
        for name, matrix in (("Q", self.q_matrix), ("P", self.p_matrix)):
            if not np.allclose(matrix, matrix.T, atol=1e-10):
                raise ModelError(f"{name} must be symmetric")
            if float(np.linalg.eigvalsh(matrix).min()) <= 0.0:
                raise ModelError(f"{name} must be positive definite")
        if self.d_matrix.shape[1] != self.p_matrix.shape[0]:
            raise ModelError("D and P dimensions do not match")
        if self.scenarios.dimension != self.m2 * (1 + self.n1):
            raise ModelError("scenario dimension must equal m2 * (1 + n1)")

    @property
    def n1(self) -> int:
        return int(self.q_matrix.shape[0])

    @property
    def n2(self) -> int:
        return int(self.p_matrix.shape[0])

    @property
    def m2(self) -> int:
        return int(self.d_matrix.shape[0])

    def rhs(self, xi: Vector) -> Vector:
        """``e(xi)``."""
        return xi[: self.m2]

    def technology(self, xi: Vector) -> Matrix:
        """``C(xi)`` as an ``(m2, n1)`` matrix."""
        return xi[self.m2 :].reshape(self.m2, self.n1)

    def coupling(self, x: Vector, xi: Vector) -> Vector:
        """``g(x, xi) = e(xi) - C(xi) x``."""
        return self.rhs(xi) - self.technology(xi) @ x

    def first_stage(self, x: Vector) -> float:
        return float(0.5 * x @ self.q_matrix @ x + self.c_vector @ x)


@dataclass(frozen=True, eq=False)
class DualReduction:
    """Precomputed matrices of the reduced recourse dual.

    With ``M = D P^{-1/2}``, ``K = M M'`` and ``Phi = I - M' K^{-1} M``::

        h(x, xi) = 1/2 g'K^{-1}g + g'(K^{-1} D P^{-1} d) - 1/2 d'Hd
                   + max_{gamma >= 0} -1/2 gamma'H gamma + q(x, xi)'gamma

    where ``H = P^{-1/2} Phi^2 P^{-1/2}`` and
    ``q = H d - P^{-1/2} M' K^{-1} g``.

    Attributes:
        m_matrix: ``M``.
        phi: ``Phi``, idempotent.
        h_matrix: ``H``, PSD with rank ``n2 - m2``.
        constant: ``-1/2 d'Hd``.
        k_inverse: ``K^{-1} = (D P^{-1} D')^{-1}``.
        p_inverse: ``P^{-1}``.
        p_inverse_sqrt: ``P^{-1/2}``.
        q_offset: ``H d``.
        q_coupling: ``P^{-1/2} M' K^{-1}``, so ``q = q_offset - q_coupling g``.
        linear_coupling: ``K^{-1} D P^{-1} d``.
        d_vector: ``d``.
        d_matrix: ``D``.
    """

    m_matrix: Matrix
    phi: Matrix
    h_matrix: Matrix
    constant: float
    k_inverse: Matrix
    p_inverse: Matrix
    p_inverse_sqrt: Matrix
    q_offset: Vector
    q_coupling: Matrix
    linear_coupling: Vector
    d_vector: Vector
    d_matrix: Matrix

    def q_of(self, g: Vector) -> Vector:
        """``q`` for one coupling vector, or row-wise for a stack of them."""
        return self.q_offset - g @ self.q_coupling.T

    def base_value(self, g: Vector) -> Vector | float:
        """Terms of the dual value that do not depend on ``gamma``."""
        quadratic = 0.5 * np.einsum("...i,ij,...j->...", g, self.k_inverse, g)
        return quadratic + g @ self.linear_coupling + self.constant

    def multipliers(self, g: Vector, gamma: Vector) -> Vector:
        """Equality multipliers maximizing the dual for fixed ``gamma``."""
        dp = self.d_matrix @ self.p_inverse
        inner = g - (gamma - self.d_vector) @ dp.T
        return inner @ self.k_inverse.T


@dataclass(frozen=True, eq=False)
class RecourseSolution:
    """Optimal recourse value with dual and primal solutions.

    Attributes:
        value: ``h(x, xi)``.
        gamma: Multipliers of ``y >= 0``.
        multipliers: Multipliers ``lambda`` of ``D y = g``.
        decision: Second-stage decision ``y``.
    """

    value: float
    gamma: Vector
    multipliers: Vector
    decision: Vector


@dataclass(frozen=True, eq=False)
class SdModel:
    """Terminal SD approximation ``1/2 x'Qx + c'x + max_j (alpha_j + beta_j'x)``.

    The minorants are stored already rescaled to the final iteration.
    """

    q_matrix: Matrix
    c_vector: Vector
    intercepts: Vector
    slopes: Matrix
    iteration: int

    def recourse_model(self, x: Vector) -> float:
        return float(np.max(self.intercepts + self.slopes @ x))

    def evaluate(self, x: Vector) -> float:
        return float(0.5 * x @ self.q_matrix @ x + self.c_vector @ x) + self.recourse_model(x)

    def subgradient(self, x: Vector) -> Vector:
        active = int(np.argmax(self.intercepts + self.slopes @ x))
        return self.q_matrix @ x + self.c_vector + self.slopes[active]


@dataclass(frozen=True, eq=False)
class SdIterate:
    """One row of the SD trace.

    Attributes:
        iteration: ``k``.
        candidate: Master solution ``x_k`` at the start of the iteration.
        incumbent: Incumbent ``x_hat_k`` after the update test.
        incumbent_updated: Whether the candidate became the incumbent.
        minorant_count: Minorants kept after the iteration.
        candidate_cut: ``(alpha, beta)`` of the minorant built at ``x_k``.
        incumbent_cut: ``(alpha, beta)`` of the minorant built at ``x_hat_{k-1}``.
    """

    iteration: int
    candidate: Vector
    incumbent: Vector
    incumbent_updated: bool
    minorant_count: int
    candidate_cut: tuple[float, Vector]
    incumbent_cut: tuple[float, Vector]


@dataclass(frozen=True, eq=False)
class SdResult:
    """Output of one SD run.

    Attributes:
        incumbent: Final incumbent ``x_hat_n``.
        model: Terminal approximation.
        trace: Per-iteration log.
        samples: Scenarios drawn, in order.
        seed: Master seed.
        replication_index: Stream index of the run.
        stream_key: Stream prefix.
    """

    incumbent: Vector
    model: SdModel
    trace: tuple[SdIterate, ...]
    samples: Matrix
    seed: int
    replication_index: int
    stream_key: tuple[int, ...] = field(default=())


@dataclass(frozen=True, eq=False)
class AugmentedSdModel:
    """``f_check(x) = max{f_hat(x), f_hat(x_hat) - epsilon'}``."""

    model: SdModel
    incumbent: Vector
    floor: float
    epsilon_prime: float

    def evaluate(self, x: Vector) -> float:
        return max(self.model.evaluate(x), self.floor)

    def subgradient(self, x: Vector) -> Vector:
        if self.model.evaluate(x) >= self.floor:
            return self.model.subgradient(x)
        return np.zeros_like(x)
