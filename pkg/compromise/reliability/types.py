"""Data types for reliability measurements and bounds."""

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from compromise.errors import ModelError
from compromise.model.types import Matrix

Provenance = Literal["grid-sublevel", "singleton", "sampled"]
BoundFlavor = Literal["saa-cost", "saa-solution", "cutplane", "sd"]


@dataclass(frozen=True, eq=False)
class PointSet:
    """A finite set of decisions.

    Attributes:
        points: ``(k, p)`` array, one decision per row.
        provenance: How the set was produced.

    Example:
        >>> PointSet.singleton(np.array([0.5, 0.5])).size
        1
    """

    points: Matrix
    provenance: Provenance = "sampled"

    @classmethod
    def singleton(cls, x: np.ndarray) -> "PointSet":
        return cls(np.atleast_2d(np.asarray(x, dtype=np.float64)), "singleton")

    @property
    def size(self) -> int:
        return int(self.points.shape[0])


@dataclass(frozen=True)
class BoundConstants:
    """Problem constants entering the uniform sampling-error bounds.

    Attributes:
        lipschitz: Hölder constant ``L_F``.
        holder: Hölder exponent ``gamma`` in ``(0, 1]``.
        bound: Uniform bound ``M_F``.
        edge_length: Edge ``D`` of a cube containing the region.
        diameter: ``D_X``.
        dimension: ``p``.
        lam: Rate exponent ``lambda`` in ``(0, 1/2)``.
    """

    lipschitz: float
    holder: float
    bound: float
    edge_length: float
    diameter: float
    dimension: int
    lam: float = 0.25

    def __post_init__(self) -> None:
        if not 0.0 < self.holder <= 1.0:
            raise ModelError("holder exponent must lie in (0, 1]")
        if min(self.lipschitz, self.bound, self.edge_length, self.diameter) < 0.0:
            raise ModelError("bound constants must be nonnegative")


@dataclass(frozen=True, eq=False)
class BoundRecord:
    """Theoretical bounds evaluated for one experiment cell.

    Attributes:
        flavor: Which family of bounds was evaluated.
        n: Sample size.
        m: Replication count.
        values: Named bound values, all nonnegative.
    """

    flavor: BoundFlavor
    n: int
    m: int
    values: dict[str, float] = field(default_factory=dict)

    def __getitem__(self, key: str) -> float:
        return self.values[key]


@dataclass(frozen=True)
class DeltaStats:
    """Mean, unbiased variance and standard error over macro-replications."""

    mean: float
    variance: float
    stderr: float
    count: int


@dataclass(frozen=True)
class RateFit:
    """Least-squares fit of ``log y = slope log n + intercept``."""

    slope: float
    intercept: float
    r_squared: float


@dataclass(frozen=True)
class RademacherEstimate:
    """Rademacher average of a finite set or a gridded function class.

    Attributes:
        value: Exact value or Monte Carlo mean.
        stderr: Monte Carlo standard error, zero when exact.
        mode: ``"exact"`` or ``"monte-carlo"``.
        upper_bound: Closed-form upper bound reported alongside.
    """

    value: float
    stderr: float
    mode: Literal["exact", "monte-carlo"]
    upper_bound: float


@dataclass(frozen=True)
class CellStatistics:
    """Reliability statistics of one ``(n, m)`` cell over its macro-replications.

    Attributes:
        flavor: Experiment flavor (``saa``, ``cutplane`` or ``sd``).
        n: Sample size.
        m: Replication count.
        delta: Pessimistic distance of the compromise decision to ``X*_eps``.
        cost_error: ``|theta_c - theta*|``.
        margin: Margin of error of each macro-replication.
        delta_bounds: Theoretical expectation and variance bounds on ``delta``.
        cost_bounds: Theoretical bounds on ``cost_error``; empty when none apply.
        margin_bound: Bound on the expected margin of error, NaN when unknown.
        objective: ``E[Delta] + weight Var[Delta]``.
        non_dominated: Whether no other cell has smaller mean and variance.
    """

    flavor: str
    n: int
    m: int
    delta: DeltaStats
    cost_error: DeltaStats
    margin: DeltaStats
    delta_bounds: dict[str, float]
    cost_bounds: dict[str, float]
    margin_bound: float
    objective: float
    non_dominated: bool = False


@dataclass(frozen=True)
class ReportRow:
    """One ``(flavor, n, m, metric)`` line of a reliability report."""

    flavor: str
    n: int
    m: int
    macro_reps: int
    metric: str
    value: float
    stderr: float
    bound: float
    slope: float


@dataclass(frozen=True)
class ReliabilityReport:
    """Cells of an experiment together with fitted log-log slopes.

    Attributes:
        cells: Cell statistics ordered by ``(n, m)``.
        slopes: Fitted slope against ``n`` keyed by ``(flavor, m, metric)``;
            NaN where fewer than three ``n`` values are available.
        weight: Weight of the variance in the mean-variance objective.
    """

    cells: tuple[CellStatistics, ...]
    slopes: dict[tuple[str, int, str], float]
    weight: float
