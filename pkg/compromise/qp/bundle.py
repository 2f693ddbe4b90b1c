"""Cut-generation loops over convex oracles.

``prox_cut_loop`` minimizes a weighted sum of oracles plus a fixed prox term
by refreshing one cut group per oracle at every master iterate.
``proximal_bundle`` minimizes a single oracle without regularization by
moving the prox centre on serious steps.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from compromise.errors import SolverError
from compromise.model.types import ConvexOracle, FeasibleRegion, Matrix, Vector
from compromise.qp.master import solve_prox_master
from compromise.qp.types import CutGroup, ProxMaster

__all__ = ["BundleResult", "CutLoopResult", "prox_cut_loop", "proximal_bundle"]

_logger = logging.getLogger(__name__)

# --- Loop controls -----------------------------------------------------------

_DEFAULT_GAP = 1e-8
_DEFAULT_MAX_ITERATIONS = 2000
_SERIOUS_STEP_FRACTION = 0.1
_DUPLICATE_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class CutLoopResult:
    """Outcome of a cut-generation loop.

    Attributes:
        point: Final master iterate.
        value: True objective at ``point`` (prox term included when present).
        model_value: Master objective at ``point``.
        gap: ``value - model_value``.
        iterations: Master solves performed.
        groups: Final cut groups, one per oracle.
        kkt_residual: Residual of the last master solve.
    """

    point: Vector
    value: float
    model_value: float
    gap: float
    iterations: int
    groups: tuple[CutGroup, ...]
    kkt_residual: float


class _CutStore:
    """Growing cut collection for one oracle."""

    def __init__(self, weight: float, dimension: int) -> None:
        self.weight = weight
        self._intercepts: list[float] = []
        self._slopes: list[Vector] = []
        self._dimension = dimension

    def add(self, intercept: float, slope: Vector) -> None:
        for a, b in zip(self._intercepts, self._slopes, strict=True):
            if abs(a - intercept) <= _DUPLICATE_TOLERANCE and np.allclose(
                b, slope, rtol=0.0, atol=_DUPLICATE_TOLERANCE
            ):
                return
        self._intercepts.append(float(intercept))
        self._slopes.append(np.asarray(slope, dtype=np.float64))

    def add_linearization(self, oracle: ConvexOracle, x: Vector) -> float:
        value = oracle.value(x)
        slope = oracle.subgradient(x)
        self.add(value - float(slope @ x), slope)
        return value

    def group(self) -> CutGroup:
        slopes: Matrix = (
            np.vstack(self._slopes) if self._slopes else np.zeros((0, self._dimension))
        )
        return CutGroup(self.weight, np.asarray(self._intercepts), slopes)


def prox_cut_loop(
    oracles: Sequence[ConvexOracle],
    weights: Sequence[float],
    region: FeasibleRegion,
    rho: float,
    anchor: Vector,
    *,
    initial_groups: Sequence[CutGroup] | None = None,
    start: Vector | None = None,
    gap_tolerance: float = _DEFAULT_GAP,
    max_iterations: int = _DEFAULT_MAX_ITERATIONS,
) -> CutLoopResult:
    """Minimize ``sum_i w_i f_i(x) + rho/2 ||x - anchor||^2`` over the region.

    Each oracle owns one cut group in the master. Every iteration adds the
    exact linearization of each oracle at the master iterate and stops once
    the true objective exceeds the master value by at most ``gap_tolerance``.

    Raises:
        SolverError: If the gap is not closed within ``max_iterations``.
    """
    stores = [_CutStore(w, region.dimension) for w in weights]
    if initial_groups is not None:
        for store, group in zip(stores, initial_groups, strict=True):
            for a, b in zip(group.intercepts, group.slopes, strict=True):
                store.add(float(a), b)
    x = region.center.copy() if start is None else np.asarray(start, dtype=np.float64)
    for store, oracle in zip(stores, oracles, strict=True):
        store.add_linearization(oracle, x)

    for iteration in range(1, max_iterations + 1):
        master = ProxMaster(
            groups=tuple(s.group() for s in stores), region=region, rho=rho, anchor=anchor
        )
        solution = solve_prox_master(master)
        x = solution.point
        diff = x - anchor
        prox = 0.5 * rho * float(diff @ diff)
        true_value = prox + sum(
            store.weight * store.add_linearization(oracle, x)
            for store, oracle in zip(stores, oracles, strict=True)
        )
        gap = true_value - solution.value
        _logger.debug("prox cut loop iteration %d gap %.3e", iteration, gap)
        if gap <= gap_tolerance * max(1.0, abs(true_value)):
            return CutLoopResult(
                point=x,
                value=true_value,
                model_value=solution.value,
                gap=max(gap, 0.0),
                iterations=iteration,
                groups=master.groups,
                kkt_residual=solution.kkt_residual,
            )
    raise SolverError("aggregate master did not converge")


@dataclass(frozen=True, eq=False)
class BundleResult:
    """Outcome of the proximal bundle method.

    Attributes:
        point: Final prox centre.
        value: Oracle value at ``point``.
        gap: Decrease the model still predicted at termination.
        iterations: Master solves performed.
        kkt_residual: Residual of the last master solve.
    """

    point: Vector
    value: float
    gap: float
    iterations: int
    kkt_residual: float


def proximal_bundle(
    oracle: ConvexOracle,
    *,
    start: Vector | None = None,
    rho: float = 1.0,
    tolerance: float = 1e-10,
    max_iterations: int = _DEFAULT_MAX_ITERATIONS,
) -> BundleResult:
    """Minimize a convex oracle over its region with a proximal bundle method.

    The prox centre moves when the realized decrease is at least a fixed
    fraction of the decrease the model predicted; otherwise the new cut is
    kept and the centre stays (null step).

    Raises:
        SolverError: If the predicted decrease is still above ``tolerance``
            after ``max_iterations`` master solves.
    """
    region: FeasibleRegion = oracle.region
    center = region.center.copy() if start is None else np.asarray(start, dtype=np.float64)
    store = _CutStore(1.0, region.dimension)
    center_value = store.add_linearization(oracle, center)
    for iteration in range(1, max_iterations + 1):
        master = ProxMaster(groups=(store.group(),), region=region, rho=rho, anchor=center)
        solution = solve_prox_master(master)
        candidate = solution.point
        predicted = center_value - master.model_value(candidate)
        if predicted <= tolerance * max(1.0, abs(center_value)):
            _logger.debug("proximal bundle converged after %d iterations", iteration)
            return BundleResult(
                point=center,
                value=center_value,
                gap=max(predicted, 0.0),
                iterations=iteration,
                kkt_residual=solution.kkt_residual,
            )
        candidate_value = store.add_linearization(oracle, candidate)
        if center_value - candidate_value >= _SERIOUS_STEP_FRACTION * predicted:
            center, center_value = candidate, candidate_value
    raise SolverError("proximal bundle did not converge")
