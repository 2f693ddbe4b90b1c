"""Cross-replication augmentation of piecewise-linear models."""

from collections.abc import Sequence

import numpy as np

from compromise.cutplane.types import AugmentationRecord, PiecewiseLinearModel
from compromise.errors import ModelError
from compromise.model.types import ConvexOracle, Vector

__all__ = ["augment_model"]


def augment_model(
    models: Sequence[PiecewiseLinearModel],
    anchors: Sequence[Vector],
    oracles: Sequence[ConvexOracle],
    epsilon2: float = 0.0,
) -> list[PiecewiseLinearModel]:
    """Add to each replication's model a cut of its own ``f_n`` at every anchor.

    Model ``i`` gains ``f_n(x_hat_j; i) + <v, x - x_hat_j> - epsilon2`` for
    every ``j``, with ``v`` an exact subgradient of replication ``i``'s
    sample average at ``x_hat_j``.

    Raises:
        ModelError: If the lists are misaligned, ``epsilon2 < 0`` or an anchor
            lies outside the region ("anchor outside region").
    """
    if len(models) != len(oracles):
        raise ModelError("one oracle per model required")
    if epsilon2 < 0.0:
        raise ModelError("epsilon2 must be nonnegative")
    points = [np.asarray(a, dtype=np.float64) for a in anchors]
    augmented = []
    for model, oracle in zip(models, oracles, strict=True):
        if any(not model.region.contains(a) for a in points):
            raise ModelError("anchor outside region")
        slopes = np.vstack([oracle.subgradient(a) for a in points])
        values = np.array([oracle.value(a) for a in points])
        intercepts = values - np.einsum("ij,ij->i", slopes, np.vstack(points)) - epsilon2
        records = tuple(
            AugmentationRecord(source=j, anchor=a, epsilon2=epsilon2) for j, a in enumerate(points)
        )
        augmented.append(model.with_cuts(intercepts, slopes, records))
    return augmented
