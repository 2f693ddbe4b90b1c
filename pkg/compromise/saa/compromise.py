"""Compromise decision problems over replicated solves.

Every flavor minimizes ``(1/m) sum_i g_i(x) + rho/2 ||x - x_bar||^2`` over
the region, where ``g_i`` is the replication's sample average (exact and
inexact flavors) or its augmented cutting-plane model.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

from compromise.cutplane.types import PiecewiseLinearModel
from compromise.errors import ModelError
from compromise.model.types import FeasibleRegion, Vector
from compromise.qp import (
    ProxMaster,
    minimize_cut_model,
    prox_cut_loop,
    proximal_bundle,
    solve_prox_master,
)
from compromise.saa.replication import solve_saa
from compromise.saa.types import CompromiseResult, ReplicationResult, SaaInstance

__all__ = [
    "AggregateSolution",
    "aggregate_minimize",
    "aggregate_value",
    "algorithm_augmented_compromise",
    "default_rho",
    "exact_compromise",
    "inexact_compromise",
    "stopping_gap",
    "verify_stopping",
]

_logger = logging.getLogger(__name__)

# --- Tolerances --------------------------------------------------------------

_EXACT_EPSILON = 1e-8
_MEMBERSHIP_TOLERANCE = 1e-8
_SOLVER_TOLERANCE = 1e-8

RhoPreset = Literal["n", "kn", "kn2"]


def default_rho(n: int, preset: RhoPreset = "n", k: float = 1.0) -> float:
    """Prox weight presets ``n``, ``K n`` and ``K n^2``."""
    if preset == "n":
        return float(n)
    if preset == "kn":
        return k * n
    return k * n * n


@dataclass(frozen=True, eq=False)
class AggregateSolution:
    """Minimizer of an aggregate master.

    Attributes:
        point: Minimizer.
        value: Objective at ``point``, prox term included when ``rho > 0``.
        kkt_residual: Residual of the last QP solve.
        iterations: Master solves performed.
    """

    point: Vector
    value: float
    kkt_residual: float
    iterations: int


@dataclass(frozen=True, eq=False)
class _AggregateOracle:
    region: FeasibleRegion
    instances: Sequence[SaaInstance]

    def value(self, x: Vector) -> float:
        return aggregate_value(self.instances, x)

    def subgradient(self, x: Vector) -> Vector:
        return np.mean([inst.subgradient(x) for inst in self.instances], axis=0)


def aggregate_value(instances: Sequence[SaaInstance], x: Vector) -> float:
    """``(1/m) sum_i f_n(x; i)``."""
    return float(np.mean([inst.value(x) for inst in instances]))


def _quadratic_aggregate(
    instances: Sequence[SaaInstance],
) -> tuple[np.ndarray, np.ndarray, float] | None:
    parts = [inst.quadratic_coefficients() for inst in instances]
    if any(part is None for part in parts):
        return None
    q_matrix = np.mean([part[0] for part in parts if part is not None], axis=0)
    c_vector = np.mean([part[1] for part in parts if part is not None], axis=0)
    constant = float(np.mean([part[2] for part in parts if part is not None]))
    return q_matrix, c_vector, constant


def aggregate_minimize(
    instances: Sequence[SaaInstance], rho: float, anchor: Vector | None = None
) -> AggregateSolution:
    """Minimize the replication average plus ``rho/2 ||x - anchor||^2``.

    Quadratic averages are solved as one QP. Otherwise each replication
    enters the master as its own cut group, refreshed with exact cuts at
    every master iterate until the master gap is at most ``1e-8``. With
    ``rho = 0`` the oracle path falls back to a proximal bundle.

    Raises:
        SolverError: If the cut loop or the bundle does not converge.
    """
    region = instances[0].region
    quadratic = _quadratic_aggregate(instances)
    if quadratic is not None:
        q_matrix, c_vector, constant = quadratic
        if rho > 0.0 and anchor is not None:
            master = ProxMaster(
                groups=(),
                region=region,
                rho=rho,
                anchor=anchor,
                q_matrix=q_matrix,
                c_vector=c_vector,
                constant=constant,
            )
            solution = solve_prox_master(master)
        else:
            solution = minimize_cut_model(
                [], region, q_matrix=q_matrix, c_vector=c_vector, constant=constant
            )
        return AggregateSolution(
            solution.point, solution.value, solution.kkt_residual, solution.iterations
        )

    if rho > 0.0 and anchor is not None:
        m = len(instances)
        result = prox_cut_loop(
            instances,
            [1.0 / m] * m,
            region,
            rho,
            anchor,
            start=anchor if region.contains(anchor) else None,
        )
        return AggregateSolution(result.point, result.value, result.kkt_residual, result.iterations)
    bundle = proximal_bundle(_AggregateOracle(region, instances), start=anchor)
    return AggregateSolution(bundle.point, bundle.value, bundle.kkt_residual, bundle.iterations)


def _compromise(
    points: Sequence[Vector],
    instances: Sequence[SaaInstance],
    rho: float | None,
    flavor: Literal["exact", "inexact"],
    epsilon: float,
) -> CompromiseResult:
    anchor = np.mean(np.vstack(points), axis=0)
    weight = float(instances[0].size) if rho is None else rho
    solution = aggregate_minimize(instances, weight, anchor)
    _logger.info(
        "%s compromise over %d replications: gap %.3e",
        flavor,
        len(instances),
        float(np.linalg.norm(anchor - solution.point)),
    )
    return CompromiseResult(
        point=solution.point,
        anchor=anchor,
        value=solution.value,
        flavor=flavor,
        rho=weight,
        epsilon=epsilon,
        kkt_residual=solution.kkt_residual,
    )


def exact_compromise(
    results: Sequence[ReplicationResult],
    instances: Sequence[SaaInstance],
    rho: float | None = None,
) -> CompromiseResult:
    """Compromise anchored at the average of exact replication solutions.

    ``rho`` defaults to the sample size ``n``.

    Raises:
        ModelError: If there are no replications or the lists differ in length.
    """
    if not results or not instances:
        raise ModelError("no replications")
    if len(results) != len(instances):
        raise ModelError("one instance per replication result required")
    if any(r.objective - r.value > _EXACT_EPSILON + r.epsilon for r in results):
        _logger.warning("exact compromise fed with inexact replication solves")
    return _compromise([r.point for r in results], instances, rho, "exact", 0.0)


def inexact_compromise(
    eps_solutions: Sequence[Vector],
    instances: Sequence[SaaInstance],
    rho: float | None = None,
    epsilon: float = 0.0,
) -> CompromiseResult:
    """Compromise anchored at the average of ``epsilon``-optimal points.

    Each point is checked against ``f_n(x) <= theta_n + epsilon`` first.

    Raises:
        ModelError: If there are no replications or a point fails the check
            ("supplied point not ε-optimal").
    """
    if not eps_solutions or not instances:
        raise ModelError("no replications")
    if len(eps_solutions) != len(instances):
        raise ModelError("one instance per supplied point required")
    for point, instance in zip(eps_solutions, instances, strict=True):
        if not instance.region.contains(point):
            raise ModelError("supplied point not ε-optimal")
        theta = solve_saa(instance, 0.0).value
        if instance.value(point) > theta + epsilon + _MEMBERSHIP_TOLERANCE:
            raise ModelError("supplied point not ε-optimal")
    return _compromise(eps_solutions, instances, rho, "inexact", epsilon)


def algorithm_augmented_compromise(
    models: Sequence[PiecewiseLinearModel], anchors: Sequence[Vector], rho: float
) -> CompromiseResult:
    """Solve the compromise over augmented cutting-plane models as one QP.

    Each model is a cut group of weight ``1/m``; the prox centre is the
    average of ``anchors``.

    Raises:
        ModelError: If there are no models.
    """
    if not models:
        raise ModelError("no replications")
    anchor = np.mean(np.vstack([np.asarray(a) for a in anchors]), axis=0)
    weight = 1.0 / len(models)
    master = ProxMaster(
        groups=tuple(model.group(weight) for model in models),
        region=models[0].region,
        rho=rho,
        anchor=anchor,
    )
    solution = solve_prox_master(master)
    return CompromiseResult(
        point=solution.point,
        anchor=anchor,
        value=solution.value,
        flavor="algorithm-augmented",
        rho=rho,
        kkt_residual=solution.kkt_residual,
    )


def stopping_gap(result: CompromiseResult) -> float:
    """``||x_bar - x_c||``."""
    return result.gap


def verify_stopping(
    result: CompromiseResult, instances: Sequence[SaaInstance], tol: float = 1e-6
) -> bool:
    """Confirm that a small stopping gap certifies both points.

    When ``||x_bar - x_c|| <= tol`` the aggregate without prox is minimized
    directly and both points must come within ``10 tol rho D_X`` plus the
    solver tolerance of that minimum.
    """
    if result.gap > tol:
        return False
    lowest = aggregate_minimize(instances, 0.0).value
    region = instances[0].region
    allowed = 10.0 * tol * result.rho * region.diameter + _SOLVER_TOLERANCE * max(1.0, abs(lowest))
    return all(
        abs(aggregate_value(instances, x) - lowest) <= allowed
        for x in (result.point, result.anchor)
    )
