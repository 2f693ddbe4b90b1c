"""Empirical reliability statistics over macro-replications and grids.

All sup-over-region quantities are taken over grid points and are therefore
lower bounds of the true suprema.
"""

import math
from collections.abc import Sequence

import numpy as np

from compromise.errors import ModelError
from compromise.model.types import Matrix, SampleSet, StochasticProgram
from compromise.reliability.distance import pessimistic_distance
from compromise.reliability.types import DeltaStats, PointSet, RateFit

__all__ = [
    "compound_sampling_error_sup",
    "delta_statistics",
    "empirical_delta_stats",
    "fit_rate",
    "mean_variance_objective",
    "non_dominated",
    "sampling_error_sup",
    "variance_deviation_bound",
    "variance_deviation_sup",
]

_DEFAULT_Y_LEVELS = 41


def delta_statistics(distances: Sequence[float]) -> DeltaStats:
    """Mean, unbiased variance and standard error of per-run statistics.

    Raises:
        ModelError: If the list is empty ("empty run list") or has one entry.
    """
    values = np.asarray(distances, dtype=np.float64)
    if values.size == 0:
        raise ModelError("empty run list")
    if values.size < 2:
        raise ModelError("at least two macro-replications required")
    variance = float(np.var(values, ddof=1))
    return DeltaStats(
        mean=float(values.mean()),
        variance=variance,
        stderr=math.sqrt(variance / values.size),
        count=int(values.size),
    )


def empirical_delta_stats(runs: Sequence[PointSet], target: PointSet) -> DeltaStats:
    """Statistics of ``Delta(run, target)`` over macro-replication outcomes.

    Each outcome is the compromise singleton or a gridded solution set.

    Example:
        >>> target = PointSet.singleton(np.zeros(1))
        >>> runs = [PointSet.singleton(np.array([v])) for v in (0.1, 0.3)]
        >>> round(empirical_delta_stats(runs, target).variance, 12)
        0.02
    """
    if not runs:
        raise ModelError("empty run list")
    return delta_statistics([pessimistic_distance(run, target) for run in runs])


def fit_rate(xs: Sequence[float], ys: Sequence[float]) -> RateFit:
    """Least-squares fit of ``log y`` against ``log x``.

    Raises:
        ModelError: With fewer than three points, or nonpositive values
            ("cannot fit log rate").
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.size < 3:
        raise ModelError("cannot fit log rate: need three matching points")
    if not (np.all(np.isfinite(y)) and np.all(y > 0.0) and np.all(x > 0.0)):
        raise ModelError("cannot fit log rate")
    log_x, log_y = np.log(x), np.log(y)
    slope, intercept = np.polyfit(log_x, log_y, 1)
    residual = log_y - (slope * log_x + intercept)
    spread = float(np.sum((log_y - log_y.mean()) ** 2))
    r_squared = 1.0 if spread == 0.0 else 1.0 - float(np.sum(residual**2)) / spread
    return RateFit(slope=float(slope), intercept=float(intercept), r_squared=r_squared)


def mean_variance_objective(mean: float, variance: float, weight: float) -> float:
    """``E[Delta] + weight Var[Delta]``."""
    if weight <= 0.0:
        raise ModelError("weight must be positive")
    return mean + weight * variance


def non_dominated(pairs: Sequence[tuple[float, float]]) -> list[int]:
    """Indices of ``(mean, variance)`` pairs no other pair dominates.

    A pair dominates another when it is no larger in both coordinates and
    strictly smaller in one.
    """
    keep = []
    for i, (mean_i, var_i) in enumerate(pairs):
        dominated = any(
            mean_j <= mean_i and var_j <= var_i and (mean_j < mean_i or var_j < var_i)
            for j, (mean_j, var_j) in enumerate(pairs)
            if j != i
        )
        if not dominated:
            keep.append(i)
    return keep


# --- Grid suprema ----------------------------------------------------------------


def _cost_matrix(prob: StochasticProgram, grid: Matrix, scenarios: Matrix) -> Matrix:
    return np.array([prob.cost.values(x, scenarios) for x in grid])


def _atoms(prob: StochasticProgram) -> tuple[Matrix, np.ndarray]:
    space = prob.scenarios
    if not space.is_finite or space.atoms is None or space.probabilities is None:
        raise ModelError("exact expectation unavailable")
    return space.atoms, space.probabilities


def sampling_error_sup(prob: StochasticProgram, samples: SampleSet, grid: Matrix) -> float:
    """``max_grid |f_n(x) - f(x)|``."""
    atoms, probabilities = _atoms(prob)
    sample_mean = _cost_matrix(prob, grid, samples.realizations).mean(axis=1)
    exact = _cost_matrix(prob, grid, atoms) @ probabilities
    return float(np.abs(sample_mean - exact).max())


def compound_sampling_error_sup(
    prob: StochasticProgram,
    samples: SampleSet,
    grid: Matrix,
    y_levels: int = _DEFAULT_Y_LEVELS,
) -> float:
    """Grid sup of ``|(1/n) sum_i H(x, y, xi_i) - E H(x, y, xi)|``.

    ``H(x, y, xi) = (F(x, xi) - y)^2`` and ``y`` ranges over ``[-M_F, M_F]``
    together with ``f(x)`` and ``f_n(x)`` at each grid point.
    """
    atoms, probabilities = _atoms(prob)
    bound = prob.constants.bound
    sampled = _cost_matrix(prob, grid, samples.realizations)
    exact = _cost_matrix(prob, grid, atoms)
    levels = np.linspace(-bound, bound, y_levels)
    worst = 0.0
    for sample_row, exact_row in zip(sampled, exact, strict=True):
        ys = np.concatenate([levels, [sample_row.mean(), float(exact_row @ probabilities)]])
        sample_h = ((sample_row[None, :] - ys[:, None]) ** 2).mean(axis=1)
        exact_h = ((exact_row[None, :] - ys[:, None]) ** 2) @ probabilities
        worst = max(worst, float(np.abs(sample_h - exact_h).max()))
    return worst


def variance_deviation_sup(prob: StochasticProgram, samples: SampleSet, grid: Matrix) -> float:
    """``max_grid |s_n^2(x) - sigma^2(x)|``.

    Raises:
        ModelError: If fewer than two samples are given ("variance undefined").
    """
    if samples.size < 2:
        raise ModelError("variance undefined")
    atoms, probabilities = _atoms(prob)
    sample_var = np.var(_cost_matrix(prob, grid, samples.realizations), axis=1, ddof=1)
    exact = _cost_matrix(prob, grid, atoms)
    mean = exact @ probabilities
    exact_var = ((exact - mean[:, None]) ** 2) @ probabilities
    return float(np.abs(sample_var - exact_var).max())


def variance_deviation_bound(bound: float, delta_f: float, delta_h: float, n: int) -> float:
    """``4 M_F delta_f + delta_h + 4 M_F^2 / (n - 1)``."""
    if n < 2:
        raise ModelError("variance undefined")
    return 4.0 * bound * delta_f + delta_h + 4.0 * bound**2 / (n - 1)
