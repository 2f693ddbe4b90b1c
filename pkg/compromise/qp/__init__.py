"""Dense convex QP kernel: nonnegative QPs, prox masters and cut loops."""

from compromise.qp.active_set import solve_nonneg_qp
from compromise.qp.bundle import BundleResult, CutLoopResult, prox_cut_loop, proximal_bundle
from compromise.qp.dump import dump_qp, write_qp_dump
from compromise.qp.interior_point import QpData, QpResult, solve_qp
from compromise.qp.master import (
    minimize_cut_model,
    project_onto_region,
    solve_lp_master,
    solve_prox_master,
)
from compromise.qp.types import CutGroup, NonnegQP, ProxMaster, QpSolution

__all__ = [
    "BundleResult",
    "CutGroup",
    "CutLoopResult",
    "NonnegQP",
    "ProxMaster",
    "QpData",
    "QpResult",
    "QpSolution",
    "dump_qp",
    "minimize_cut_model",
    "project_onto_region",
    "prox_cut_loop",
    "proximal_bundle",
    "solve_lp_master",
    "solve_nonneg_qp",
    "solve_prox_master",
    "solve_qp",
    "write_qp_dump",
]
