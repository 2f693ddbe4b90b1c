"""Data types for Kelley cutting-plane runs and augmented replication models."""

from dataclasses import dataclass, field

import numpy as np

from compromise.errors import ModelError
from compromise.model.types import FeasibleRegion, Matrix, Vector
from compromise.qp.types import CutGroup


@dataclass(frozen=True)
class CutPlaneConfig:
    """Controls of a cutting-plane run.

    Attributes:
        epsilon1: Termination gap ``f_n(x) - model(x)``; positive.
        max_iterations: Master solves allowed before giving up.
        epsilon2: Slack subtracted from augmentation cuts; nonnegative.
    """

    epsilon1: float = 1e-6
    max_iterations: int = 500
    epsilon2: float = 0.0

    def __post_init__(self) -> None:
        if not self.epsilon1 > 0.0:
            raise ModelError("epsilon1 must be positive")
        if self.epsilon2 < 0.0:
            raise ModelError("epsilon2 must be nonnegative")
        if self.max_iterations < 1:
            raise ModelError("max_iterations must be at least 1")


@dataclass(frozen=True, eq=False)
class AugmentationRecord:
    """One cut added to a model at another replication's candidate.

    Attributes:
        source: Replication index ``j`` that supplied the anchor.
        anchor: Candidate ``x_hat_j``.
        epsilon2: Slack the cut was lowered by.
    """

    source: int
    anchor: Vector
    epsilon2: float


@dataclass(frozen=True, eq=False)
class PiecewiseLinearModel:
    """``x -> max_l (alpha_l + <beta_l, x>)``, an outer approximation of ``f_n``.

    Attributes:
        region: Region the model is minimized over.
        intercepts: ``alpha_l``.
        slopes: ``(L, p)`` matrix of ``beta_l``.
        sample_id: Identifier of the sample set the model approximates.
        augmentations: Cuts added after the run, in insertion order.

    Example:
        >>> model = PiecewiseLinearModel(make_box([0], [1]), np.array([0.0]), np.array([[1.0]]))
        >>> model.value(np.array([0.5]))
        0.5
    """

    region: FeasibleRegion
    intercepts: Vector
    slopes: Matrix
    sample_id: str = ""
    augmentations: tuple[AugmentationRecord, ...] = field(default=())

    @property
    def size(self) -> int:
        return int(self.intercepts.size)

    def value(self, x: Vector) -> float:
        return float(np.max(self.intercepts + self.slopes @ x))

    def subgradient(self, x: Vector) -> Vector:
        return np.asarray(self.slopes[int(np.argmax(self.intercepts + self.slopes @ x))])

    def group(self, weight: float = 1.0) -> CutGroup:
        return CutGroup(weight, self.intercepts, self.slopes)

    def with_cuts(
        self, intercepts: Vector, slopes: Matrix, records: tuple[AugmentationRecord, ...]
    ) -> "PiecewiseLinearModel":
        """Copy with extra cuts appended and their records attached."""
        return PiecewiseLinearModel(
            region=self.region,
            intercepts=np.concatenate([self.intercepts, intercepts]),
            slopes=np.vstack([self.slopes, np.atleast_2d(slopes)]),
            sample_id=self.sample_id,
            augmentations=self.augmentations + records,
        )


@dataclass(frozen=True, eq=False)
class CutPlaneResult:
    """Outcome of one Kelley run.

    Attributes:
        point: ``x_hat_n``, a minimizer of the final model.
        model: Final outer approximation.
        gap: Termination certificate ``f_n(x_hat) - model(x_hat)``.
        lower_bound: ``min_X model``, a lower bound on ``theta_n``.
        iterations: Master solves performed.
        evaluated_points: Every point where ``f_n`` was queried, in order.
    """

    point: Vector
    model: PiecewiseLinearModel
    gap: float
    lower_bound: float
    iterations: int
    evaluated_points: Matrix
