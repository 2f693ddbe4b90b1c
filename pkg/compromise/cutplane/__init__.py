"""Kelley cutting planes and augmented replication models."""

from compromise.cutplane.augment import augment_model
from compromise.cutplane.kelley import (
    audit_outer_approximation,
    run_cutting_plane,
    verify_certificate,
)
from compromise.cutplane.types import (
    AugmentationRecord,
    CutPlaneConfig,
    CutPlaneResult,
    PiecewiseLinearModel,
)

__all__ = [
    "AugmentationRecord",
    "CutPlaneConfig",
    "CutPlaneResult",
    "PiecewiseLinearModel",
    "audit_outer_approximation",
    "augment_model",
    "run_cutting_plane",
    "verify_certificate",
]
