"""Randomized checks of the declared properties of a stochastic program."""

import logging

import numpy as np

from compromise.model.region import random_points
from compromise.model.types import Matrix, ProbeReport, StochasticProgram

__all__ = [
    "bound_probe",
    "convexity_probe",
    "holder_probe",
]

_logger = logging.getLogger(__name__)

_DEFAULT_TRIALS = 1000
_DEFAULT_TOLERANCE = 1e-9


def _random_scenarios(prob: StochasticProgram, rng: np.random.Generator, count: int) -> Matrix:
    space = prob.scenarios
    if space.is_finite:
        assert space.atoms is not None
        return space.atoms[rng.integers(0, space.size, size=count)]
    assert space.sampler is not None
    return space.sampler.draw(rng, count)


def _report(name: str, trials: int, violations: list[float], tol: float) -> ProbeReport:
    report = ProbeReport(
        name=name,
        trials=trials,
        worst_violation=max(violations, default=0.0),
        tolerance=tol,
    )
    if not report.passed:
        _logger.warning("%s probe failed: worst violation %.3e", name, report.worst_violation)
    return report


def convexity_probe(
    prob: StochasticProgram,
    *,
    trials: int = _DEFAULT_TRIALS,
    seed: int = 0,
    tol: float = _DEFAULT_TOLERANCE,
) -> ProbeReport:
    """Midpoint convexity of ``F(., xi)`` on random ``(x, y, xi)`` triples."""
    rng = np.random.default_rng(seed)
    xs = random_points(prob.region, rng, trials)
    ys = random_points(prob.region, rng, trials)
    scenarios = _random_scenarios(prob, rng, trials)
    violations = []
    for x, y, xi in zip(xs, ys, scenarios, strict=True):
        mid = prob.cost.value(0.5 * (x + y), xi)
        chord = 0.5 * (prob.cost.value(x, xi) + prob.cost.value(y, xi))
        violations.append(mid - chord)
    return _report("convexity", trials, violations, tol)


def holder_probe(
    prob: StochasticProgram,
    *,
    trials: int = _DEFAULT_TRIALS,
    seed: int = 0,
    tol: float = _DEFAULT_TOLERANCE,
) -> ProbeReport:
    """``|F(x, xi) - F(y, xi)| <= L_F ||x - y||^gamma`` on random pairs."""
    rng = np.random.default_rng(seed)
    xs = random_points(prob.region, rng, trials)
    ys = random_points(prob.region, rng, trials)
    scenarios = _random_scenarios(prob, rng, trials)
    lipschitz = prob.constants.lipschitz
    gamma = prob.constants.holder
    violations = []
    for x, y, xi in zip(xs, ys, scenarios, strict=True):
        gap = abs(prob.cost.value(x, xi) - prob.cost.value(y, xi))
        violations.append(gap - lipschitz * float(np.linalg.norm(x - y)) ** gamma)
    return _report("holder", trials, violations, tol)


def bound_probe(
    prob: StochasticProgram,
    *,
    trials: int = _DEFAULT_TRIALS,
    seed: int = 0,
    tol: float = _DEFAULT_TOLERANCE,
) -> ProbeReport:
    """``|F(x, xi)| <= M_F`` on random pairs."""
    rng = np.random.default_rng(seed)
    xs = random_points(prob.region, rng, trials)
    scenarios = _random_scenarios(prob, rng, trials)
    violations = [
        abs(prob.cost.value(x, xi)) - prob.constants.bound
        for x, xi in zip(xs, scenarios, strict=True)
    ]
    return _report("bound", trials, violations, tol)
