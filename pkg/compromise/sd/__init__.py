"""Stochastic Decomposition for two-stage stochastic quadratic programs."""

from compromise.sd.compromise import augment_sd_model, augmented_certificate, sd_compromise
from compromise.sd.decomposition import SdState, audit_minorants, default_step, run_sd
from compromise.sd.recourse import (
    SqqpCost,
    hessian_bound_m1,
    lipschitz_constant_lf,
    reduce_dual,
    solve_extensive_form,
    solve_recourse_dual,
    solve_recourse_primal,
)
from compromise.sd.types import (
    AugmentedSdModel,
    DualReduction,
    RecourseSolution,
    SdIterate,
    SdModel,
    SdResult,
    SqqpProblem,
)

__all__ = [
    "AugmentedSdModel",
    "DualReduction",
    "RecourseSolution",
    "SdIterate",
    "SdModel",
    "SdResult",
    "SdState",
    "SqqpCost",
    "SqqpProblem",
    "audit_minorants",
    "augment_sd_model",
    "augmented_certificate",
    "default_step",
    "hessian_bound_m1",
    "lipschitz_constant_lf",
    "reduce_dual",
    "run_sd",
    "sd_compromise",
    "solve_extensive_form",
    "solve_recourse_dual",
    "solve_recourse_primal",
]
