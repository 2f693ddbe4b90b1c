"""Aggregation of macro-replication outcomes into a reliability report."""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, replace

from compromise.errors import ModelError
from compromise.reliability.empirical import (
    delta_statistics,
    fit_rate,
    mean_variance_objective,
    non_dominated,
)
from compromise.reliability.types import CellStatistics, ReliabilityReport, ReportRow

__all__ = [
    "REPORT_METRICS",
    "MacroOutcome",
    "build_report",
    "report_rows",
    "summarize_cell",
]

_logger = logging.getLogger(__name__)

REPORT_METRICS = (
    "delta_mean",
    "delta_variance",
    "cost_error_mean",
    "cost_error_variance",
    "margin_of_error",
    "mean_variance",
    "non_dominated",
)
_FITTED_METRICS = REPORT_METRICS[:5]
_MIN_FIT_POINTS = 3


@dataclass(frozen=True)
class MacroOutcome:
    """Statistics of one macro-replication of a cell.

    Attributes:
        delta: Distance of the compromise decision to ``X*_eps``.
        cost_error: ``|theta_c - theta*|``.
        margin: Margin of error of the replications.
    """

    delta: float
    cost_error: float
    margin: float


def summarize_cell(
    flavor: str,
    n: int,
    m: int,
    outcomes: Sequence[MacroOutcome],
    *,
    delta_bounds: dict[str, float],
    cost_bounds: dict[str, float],
    margin_bound: float,
    weight: float,
) -> CellStatistics:
    """Collapse the macro-replications of one cell.

    Raises:
        ModelError: If fewer than two outcomes are given.
    """
    delta = delta_statistics([o.delta for o in outcomes])
    return CellStatistics(
        flavor=flavor,
        n=n,
        m=m,
        delta=delta,
        cost_error=delta_statistics([o.cost_error for o in outcomes]),
        margin=delta_statistics([o.margin for o in outcomes]),
        delta_bounds=dict(delta_bounds),
        cost_bounds=dict(cost_bounds),
        margin_bound=margin_bound,
        objective=mean_variance_objective(delta.mean, delta.variance, weight),
    )


def _metric(cell: CellStatistics, metric: str) -> tuple[float, float, float]:
    """``(value, stderr, bound)`` of one metric."""
    nan = math.nan
    if metric == "delta_mean":
        return cell.delta.mean, cell.delta.stderr, cell.delta_bounds.get("expectation", nan)
    if metric == "delta_variance":
        return cell.delta.variance, nan, cell.delta_bounds.get("variance", nan)
    if metric == "cost_error_mean":
        cost = cell.cost_error
        return cost.mean, cost.stderr, cell.cost_bounds.get("expectation", nan)
    if metric == "cost_error_variance":
        return cell.cost_error.variance, nan, cell.cost_bounds.get("variance", nan)
    if metric == "margin_of_error":
        return cell.margin.mean, cell.margin.stderr, cell.margin_bound
    if metric == "mean_variance":
        return cell.objective, nan, nan
    return float(cell.non_dominated), nan, nan


def _slope(cells: Sequence[CellStatistics], metric: str) -> float:
    ordered = sorted(cells, key=lambda c: c.n)
    if len({c.n for c in ordered}) < _MIN_FIT_POINTS:
        return math.nan
    try:
        fit = fit_rate([c.n for c in ordered], [_metric(c, metric)[0] for c in ordered])
    except ModelError:
        _logger.debug("no %s slope for %s m=%d", metric, ordered[0].flavor, ordered[0].m)
        return math.nan
    return fit.slope


def build_report(cells: Sequence[CellStatistics], weight: float) -> ReliabilityReport:
    """Mark non-dominated cells and fit log-log slopes against ``n``.

    Dominance is decided among cells of the same flavor on the pair
    ``(E[Delta], Var[Delta])``. Slopes are fitted per flavor and ``m``.
    """
    ordered = sorted(cells, key=lambda c: (c.flavor, c.n, c.m))
    marked: list[CellStatistics] = []
    for flavor in sorted({c.flavor for c in ordered}):
        group = [c for c in ordered if c.flavor == flavor]
        keep = set(non_dominated([(c.delta.mean, c.delta.variance) for c in group]))
        marked.extend(replace(c, non_dominated=i in keep) for i, c in enumerate(group))

    slopes: dict[tuple[str, int, str], float] = {}
    for flavor, m in sorted({(c.flavor, c.m) for c in marked}):
        series = [c for c in marked if c.flavor == flavor and c.m == m]
        for metric in _FITTED_METRICS:
            slopes[(flavor, m, metric)] = _slope(series, metric)
    return ReliabilityReport(cells=tuple(marked), slopes=slopes, weight=weight)


def report_rows(report: ReliabilityReport) -> list[ReportRow]:
    """Flatten a report into one row per cell and metric."""
    rows = []
    for cell in report.cells:
        for metric in REPORT_METRICS:
            value, stderr, bound = _metric(cell, metric)
            rows.append(
                ReportRow(
                    flavor=cell.flavor,
                    n=cell.n,
                    m=cell.m,
                    macro_reps=cell.delta.count,
                    metric=metric,
                    value=value,
                    stderr=stderr,
                    bound=bound,
                    slope=report.slopes.get((cell.flavor, cell.m, metric), math.nan),
                )
            )
    return rows
