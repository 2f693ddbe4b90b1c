"""Augmented SD models and the SD compromise problem.

The compromise runs a prox cut loop over the augmented models as oracles
rather than one prox master with the floors entered as constant cuts.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from compromise.errors import ModelError
from compromise.model.types import FeasibleRegion, Vector
from compromise.qp import CutGroup, minimize_cut_model, prox_cut_loop
from compromise.saa.types import CompromiseResult
from compromise.sd.types import AugmentedSdModel, SdModel

__all__ = ["augment_sd_model", "augmented_certificate", "sd_compromise"]

_logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class _AugmentedOracle:
    region: FeasibleRegion
    model: AugmentedSdModel

    def value(self, x: Vector) -> float:
        return self.model.evaluate(x)

    def subgradient(self, x: Vector) -> Vector:
        return self.model.subgradient(x)


def augment_sd_model(model: SdModel, incumbent: Vector, epsilon_prime: float) -> AugmentedSdModel:
    """Floor the terminal model at ``f_hat(x_hat) - epsilon'``.

    Raises:
        ModelError: If ``epsilon_prime`` is not positive.
    """
    if not epsilon_prime > 0.0:
        raise ModelError("epsilon_prime must be positive")
    floor = model.evaluate(incumbent) - epsilon_prime
    return AugmentedSdModel(
        model=model, incumbent=np.asarray(incumbent), floor=floor, epsilon_prime=epsilon_prime
    )


def augmented_certificate(augmented: AugmentedSdModel, region: FeasibleRegion) -> float:
    """``f_check(x_hat) - min_X f_check``, at most ``epsilon'``.

    Since ``f_check = max(f_hat, floor)`` with a constant floor, its minimum
    is ``max(min_X f_hat, floor)``.
    """
    model = augmented.model
    solution = minimize_cut_model(
        [CutGroup(1.0, model.intercepts, model.slopes)],
        region,
        q_matrix=model.q_matrix,
        c_vector=model.c_vector,
    )
    lowest = max(solution.value, augmented.floor)
    return augmented.evaluate(augmented.incumbent) - lowest


def sd_compromise(
    models: Sequence[AugmentedSdModel], region: FeasibleRegion, rho: float
) -> CompromiseResult:
    """Minimize ``(1/m) sum_i f_check_i(x) + rho/2 ||x_bar - x||^2`` over the region.

    ``x_bar`` averages the incumbents carried by the augmented models.

    Raises:
        ModelError: If no models are given.
    """
    if not models:
        raise ModelError("no replications")
    anchor = np.mean([m.incumbent for m in models], axis=0)
    weight = 1.0 / len(models)
    result = prox_cut_loop(
        [_AugmentedOracle(region, m) for m in models],
        [weight] * len(models),
        region,
        rho,
        anchor,
        start=anchor if region.contains(anchor) else None,
    )
    _logger.info(
        "SD compromise over %d replications: gap %.3e after %d master solves",
        len(models),
        float(np.linalg.norm(anchor - result.point)),
        result.iterations,
    )
    return CompromiseResult(
        point=result.point,
        anchor=anchor,
        value=result.value,
        flavor="sd-augmented",
        rho=rho,
        epsilon=max(m.epsilon_prime for m in models),
        kkt_residual=result.kkt_residual,
    )
