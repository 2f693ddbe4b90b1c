"""Data types describing stochastic programs and their samples."""

from dataclasses import dataclass
from typing import Literal, Protocol, runtime_checkable

import numpy as np
from numpy.typing import NDArray

Vector = NDArray[np.float64]
Matrix = NDArray[np.float64]

RegionKind = Literal["box", "polyhedron"]
ScenarioKind = Literal["finite", "sampler"]
StructureTag = Literal["oracle-convex", "two-stage-SQQP"]

# Shared feasibility tolerance for membership tests.
FEASIBILITY_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class FeasibleRegion:
    """A nonempty compact convex set of first-stage decisions.

    Boxes keep their bounds in ``lower``/``upper``. Polyhedra ``{x : A x <= b}``
    keep the matrix data and, in ``lower``/``upper``, the smallest enclosing
    box, which is what grids and random probes iterate over.

    Attributes:
        kind: ``"box"`` or ``"polyhedron"``.
        dimension: Number of decision variables ``p``.
        lower: Box lower bounds, or the enclosing-box lower corner.
        upper: Box upper bounds, or the enclosing-box upper corner.
        a_matrix: Inequality matrix for polyhedra, ``None`` for boxes.
        b_vector: Inequality right-hand side for polyhedra.
        diameter: Upper bound ``D_X`` on pairwise distances in the region.
        edge_length: Edge ``D`` of a cube that contains the region.
        center: A point of the region used as a starting iterate.

    Example:
        >>> region = make_box([0.0, 0.0], [1.0, 1.0])
        >>> region.diameter
        1.414...
        >>> region.contains(np.array([0.5, 2.0]))
        False
    """

    kind: RegionKind
    dimension: int
    lower: Vector
    upper: Vector
    a_matrix: Matrix | None
    b_vector: Vector | None
    diameter: float
    edge_length: float
    center: Vector

    def inequalities(self) -> tuple[Matrix, Vector]:
        """Return ``(A, b)`` with the region equal to ``{x : A x <= b}``."""
        if self.kind == "box":
            eye = np.eye(self.dimension)
            return np.vstack([eye, -eye]), np.concatenate([self.upper, -self.lower])
        assert self.a_matrix is not None
        assert self.b_vector is not None
        return self.a_matrix, self.b_vector

    def contains(self, x: Vector, tol: float = FEASIBILITY_TOLERANCE) -> bool:
        """Check membership within ``tol``."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dimension,):
            return False
        a_matrix, b_vector = self.inequalities()
        return bool(np.all(a_matrix @ x <= b_vector + tol))


class ScenarioSampler(Protocol):
    """Seeded generator of scenario vectors for sampler-mode spaces."""

    @property
    def dimension(self) -> int: ...

    def draw(self, rng: np.random.Generator, n: int) -> Matrix:
        """Return an ``(n, dimension)`` array of i.i.d. scenarios."""
        ...


@dataclass(frozen=True, eq=False)
class ScenarioSpace:
    """The support of the random vector, finite or sampled.

    Attributes:
        kind: ``"finite"`` for an atom list, ``"sampler"`` for a generator.
        dimension: Scenario dimension ``d``.
        atoms: ``(N, d)`` array of atoms for finite spaces.
        probabilities: Atom probabilities summing to one.
        sampler: Generator used by sampler-mode spaces.
    """

    kind: ScenarioKind
    dimension: int
    atoms: Matrix | None = None
    probabilities: Vector | None = None
    sampler: ScenarioSampler | None = None

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def size(self) -> int:
        """Number of atoms, zero for sampler-mode spaces."""
        return 0 if self.atoms is None else int(self.atoms.shape[0])


@runtime_checkable
class CostFunction(Protocol):
    """Scenario cost ``F(x, xi)`` together with a subgradient oracle."""

    def value(self, x: Vector, xi: Vector) -> float: ...

    def subgradient(self, x: Vector, xi: Vector) -> Vector: ...

    def values(self, x: Vector, scenarios: Matrix) -> Vector:
        """Evaluate ``F(x, xi)`` for every row of ``scenarios``."""
        ...

    def subgradients(self, x: Vector, scenarios: Matrix) -> Matrix:
        """Return one subgradient row per scenario."""
        ...


@runtime_checkable
class ExtensiveFormCost(Protocol):
    """Costs whose expectation over finitely many atoms is a single QP."""

    def extensive_form(
        self, region: FeasibleRegion, atoms: Matrix, probabilities: Vector
    ) -> tuple[Vector, float]: ...


class ConvexOracle(Protocol):
    """A convex function on a region, queried through values and subgradients."""

    @property
    def region(self) -> FeasibleRegion: ...

    def value(self, x: Vector) -> float: ...

    def subgradient(self, x: Vector) -> Vector: ...


@dataclass(frozen=True)
class DeclaredConstants:
    """Problem constants supplied by the author and checked by probes.

    Attributes:
        lipschitz: Hölder constant ``L_F`` of ``F(., xi)``.
        holder: Hölder exponent ``gamma`` in ``(0, 1]``.
        bound: Uniform bound ``M_F`` on ``|F(x, xi)|``.
        recourse_lipschitz: Lipschitz constant ``L_h`` of the recourse value.
    """

    lipschitz: float
    bound: float
    holder: float = 1.0
    recourse_lipschitz: float = 0.0


@dataclass(frozen=True, eq=False)
class StochasticProgram:
    """A convex stochastic program ``min_{x in X} E[F(x, xi)]``.

    Attributes:
        name: Short identifier used in reports.
        region: Feasible region ``X``.
        scenarios: Scenario space of ``xi``.
        cost: Cost oracle ``F`` with subgradients.
        constants: Declared ``L_F``, ``gamma``, ``M_F`` and ``L_h``.
        structure: ``"oracle-convex"`` or ``"two-stage-SQQP"``.
    """

    name: str
    region: FeasibleRegion
    scenarios: ScenarioSpace
    cost: CostFunction
    constants: DeclaredConstants
    structure: StructureTag = "oracle-convex"

    @property
    def dimension(self) -> int:
        return self.region.dimension


@dataclass(frozen=True, eq=False)
class SampleSet:
    """An ordered list of scenario draws and the stream that produced it.

    Attributes:
        realizations: ``(n, d)`` array, one scenario per row.
        seed: Master seed of the experiment.
        replication_index: Replication whose stream produced the draws.
        stream_key: Extra spawn-key prefix separating experiment cells.
    """

    realizations: Matrix
    seed: int
    replication_index: int
    stream_key: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return int(self.realizations.shape[0])

    @property
    def identifier(self) -> str:
        key = ".".join(str(part) for part in (*self.stream_key, self.replication_index))
        return f"{self.seed}:{key}"


@dataclass(frozen=True)
class ProbeReport:
    """Outcome of a randomized property check.

    Attributes:
        name: Property that was probed.
        trials: Number of random trials.
        worst_violation: Largest violation observed, ``<= 0`` when none.
        tolerance: Allowed violation.
    """

    name: str
    trials: int
    worst_violation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.worst_violation <= self.tolerance
