"""Kelley's cutting-plane method and its certificates."""

import logging

import numpy as np

from compromise.cutplane.types import CutPlaneConfig, CutPlaneResult, PiecewiseLinearModel
from compromise.errors import SolverError
from compromise.model.types import ConvexOracle, Matrix, ProbeReport, Vector
from compromise.qp import CutGroup, solve_lp_master

__all__ = ["audit_outer_approximation", "run_cutting_plane", "verify_certificate"]

_logger = logging.getLogger(__name__)

_DUPLICATE_TOLERANCE = 1e-12
_ARGMIN_TOLERANCE = 1e-9


def _is_duplicate(intercepts: list[float], slopes: list[Vector], a: float, b: Vector) -> bool:
    return any(
        abs(a0 - a) <= _DUPLICATE_TOLERANCE
        and np.allclose(b0, b, rtol=0.0, atol=_DUPLICATE_TOLERANCE)
        for a0, b0 in zip(intercepts, slopes, strict=True)
    )


def run_cutting_plane(
    oracle: ConvexOracle, config: CutPlaneConfig, sample_id: str = ""
) -> CutPlaneResult:
    """Minimize a convex oracle with pure Kelley iterations.

    Starts from the region's centre. Each iteration minimizes the current
    model with an LP, queries the oracle there and stops once
    ``f(x) - model(x) <= epsilon1``. The returned model is the one the final
    master minimized, so the point is an exact minimizer of it.

    Raises:
        SolverError: If the gap is not closed within ``config.max_iterations``
            ("termination condition unmet").
    """
    region = oracle.region
    intercepts: list[float] = []
    slopes: list[Vector] = []
    evaluated: list[Vector] = []

    def add_cut(x: Vector) -> float:
        value = oracle.value(x)
        slope = np.asarray(oracle.subgradient(x), dtype=np.float64)
        intercept = value - float(slope @ x)
        evaluated.append(x.copy())
        if not _is_duplicate(intercepts, slopes, intercept, slope):
            intercepts.append(intercept)
            slopes.append(slope)
        return value

    add_cut(region.center.copy())
    for iteration in range(1, config.max_iterations + 1):
        model = PiecewiseLinearModel(
            region=region,
            intercepts=np.asarray(intercepts),
            slopes=np.vstack(slopes),
            sample_id=sample_id,
        )
        solution = solve_lp_master([model.group()], region)
        x = solution.point
        model_value = model.value(x)
        gap = add_cut(x) - model_value
        _logger.debug("Kelley iteration %d gap %.3e", iteration, gap)
        if gap <= config.epsilon1:
            return CutPlaneResult(
                point=x,
                model=model,
                gap=max(gap, 0.0),
                lower_bound=model_value,
                iterations=iteration,
                evaluated_points=np.vstack(evaluated),
            )
    raise SolverError("termination condition unmet")


def audit_outer_approximation(
    oracle: ConvexOracle,
    model: PiecewiseLinearModel,
    points: Matrix,
    tolerance: float = 1e-9,
) -> ProbeReport:
    """Check ``model(x) <= f(x) + tolerance`` at every row of ``points``."""
    worst = max(model.value(x) - oracle.value(x) for x in points)
    report = ProbeReport("outer approximation", int(points.shape[0]), float(worst), tolerance)
    if not report.passed:
        _logger.warning("outer approximation violated by %.3e", worst)
    return report


def verify_certificate(
    oracle: ConvexOracle, model: PiecewiseLinearModel, point: Vector, epsilon1: float
) -> bool:
    """Re-check a stored termination certificate.

    The point must minimize the model over the region and sit within
    ``epsilon1`` of the oracle there.
    """
    lowest = solve_lp_master([CutGroup(1.0, model.intercepts, model.slopes)], model.region).value
    at_point = model.value(point)
    minimizes = at_point - lowest <= _ARGMIN_TOLERANCE * max(1.0, abs(lowest))
    tight = oracle.value(point) - at_point <= epsilon1
    return bool(minimizes and tight and model.region.contains(point))
