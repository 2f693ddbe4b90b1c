"""Closed-form reliability bounds of compromise decisions.

Every evaluator returns nonnegative numbers; flavors pick which family of
bounds is collected into a :class:`BoundRecord`.
"""

import math
from dataclasses import dataclass

from compromise.errors import ModelError
from compromise.reliability.constants import constant_nf
from compromise.reliability.types import BoundConstants, BoundFlavor, BoundRecord

__all__ = [
    "SdPresets",
    "markov_distance_bound",
    "sampling_error_mean_bound",
    "sampling_error_tail",
    "sampling_error_variance_bound",
    "sd_event_probability",
    "sd_presets",
    "solution_tail_probability",
    "theoretical_bounds",
]


def _rate(bc: BoundConstants, n: int) -> float:
    return float(n) ** bc.lam


def _check_cell(n: int, m: int, epsilon: float, rho: float) -> None:
    if n < 1 or m < 1:
        raise ModelError("sample size and replication count must be positive")
    if epsilon <= 0.0 or rho <= 0.0:
        raise ModelError("invalid tolerance")


# --- Sampling error ----------------------------------------------------------


def sampling_error_mean_bound(bc: BoundConstants, n: int) -> float:
    """``E[delta_n] <= 2 N_F / n^lam``."""
    return 2.0 * constant_nf(bc) / _rate(bc, n)


def sampling_error_variance_bound(bc: BoundConstants, n: int) -> float:
    """``Var[delta_n] <= 4 M_F N_F / n^lam``."""
    return 4.0 * bc.bound * constant_nf(bc) / _rate(bc, n)


def sampling_error_tail(bc: BoundConstants, t: float) -> float:
    """``Pr{n^lam delta_n >= 2 N_F + t} <= exp(-t^2 / (2 M_F^2))``."""
    if t < 0.0:
        raise ModelError("tail level must be nonnegative")
    if bc.bound == 0.0:
        return 0.0
    return math.exp(-(t**2) / (2.0 * bc.bound**2))


# --- Solution sets -------------------------------------------------------------


def solution_tail_probability(bc: BoundConstants, m: int, t: float) -> float:
    """Probability that the scaled distance exceeds its constant by ``t``.

    Bounds ``Pr{(eps n^lam / (2 D_X)) Delta >= C + t}`` by
    ``m exp(-m^2 t^2 / (2 M_F^2 (2m - 1)^2))`` with ``rho = n``, capped at one.
    """
    if t < 0.0 or m < 1:
        raise ModelError("tail level must be nonnegative")
    if bc.bound == 0.0:
        return 0.0
    exponent = -(m**2) * t**2 / (2.0 * bc.bound**2 * (2 * m - 1) ** 2)
    return min(1.0, m * math.exp(exponent))


def _saa_cost(bc: BoundConstants, n: int, m: int) -> dict[str, float]:
    n_f = constant_nf(bc)
    rate = _rate(bc, n)
    return {
        "sampling_error": 2.0 * n_f / rate,
        "expectation": (6.0 * m - 4.0) / (m * rate) * n_f,
        "variance": 36.0 * bc.bound * n_f / (m * rate) + 36.0 * n_f**2 / rate**2,
    }


def _saa_solution(
    bc: BoundConstants, n: int, m: int, epsilon: float, rho: float, slack: float = 0.0
) -> dict[str, float]:
    n_f = constant_nf(bc)
    rate = _rate(bc, n)
    diameter = bc.diameter
    prox = 2.0 * math.sqrt(epsilon / rho)
    return {
        "expectation": diameter * n_f / epsilon * (8.0 * m - 4.0) / (m * rate) + slack + prox,
        "variance": 64.0 * diameter**2 * bc.bound * n_f / (m * epsilon**2 * rate)
        + (8.0 * diameter * n_f / (epsilon * rate) + slack + prox) ** 2,
        "tail_constant": epsilon**1.5 / diameter + (4.0 * m - 2.0) * n_f / m
        if diameter > 0.0
        else (4.0 * m - 2.0) * n_f / m,
    }


# --- Stochastic decomposition --------------------------------------------------


def markov_distance_bound(sd_constant: float, n: int, t: float) -> float:
    """``Pr{||x_hat_n - x*|| >= t} <= K / (t n)``, capped at one."""
    if t <= 0.0 or n < 1:
        raise ModelError("invalid tolerance")
    return min(1.0, sd_constant / (t * n))


def sd_event_probability(sd_constant: float, n: int, m: int, t: float) -> float:
    """Lower bound ``exp(-(mK/(tn)) / (1 - K/(tn)))`` on the SD distance event.

    Returns zero when ``K / (t n) >= 1``, where the bound is vacuous.
    """
    ratio = sd_constant / (t * n) if t > 0.0 and n > 0 else math.inf
    if ratio >= 1.0:
        return 0.0
    return math.exp(-(m * ratio) / (1.0 - ratio))


@dataclass(frozen=True)
class SdPresets:
    """Tolerances tuned so the SD distance event has radius ``alpha/(3-alpha) D_X + 3t``."""

    epsilon_prime: float
    epsilon: float
    rho: float
    radius: float


def sd_presets(lipschitz_f: float, diameter: float, t: float, alpha: float) -> SdPresets:
    """Pick ``eps' = L_f t``, ``rho = (3-alpha) L_f / t`` and ``eps = (3-alpha) L_f t``.

    Raises:
        ModelError: If ``t`` is outside ``(0, 1)`` or ``alpha`` outside ``(0, 3)``.
    """
    if not 0.0 < t < 1.0 or not 0.0 < alpha < 3.0:
        raise ModelError("preset parameters out of range")
    if lipschitz_f <= 0.0:
        raise ModelError("insufficient declared constants")
    return SdPresets(
        epsilon_prime=lipschitz_f * t,
        epsilon=(3.0 - alpha) * lipschitz_f * t,
        rho=(3.0 - alpha) * lipschitz_f / t,
        radius=alpha / (3.0 - alpha) * diameter + 3.0 * t,
    )


def _sd(
    bc: BoundConstants,
    n: int,
    m: int,
    epsilon: float,
    rho: float,
    epsilon_prime: float,
    sd_constant: float,
    lipschitz_f: float,
    t: float | None,
) -> dict[str, float]:
    diameter = bc.diameter
    tau3 = (epsilon_prime - epsilon) / epsilon * diameter + 2.0 * math.sqrt(epsilon / rho)
    scale = 1.0 + 2.0 * lipschitz_f * diameter / epsilon
    values = {
        "tau3": tau3,
        "expectation": scale * sd_constant / n + tau3,
        "variance": scale**2 * sd_constant * diameter / (m * n)
        + (scale * sd_constant / n + tau3) ** 2,
    }
    if t is not None:
        if epsilon > 2.0 * lipschitz_f * t + epsilon_prime:
            raise ModelError("invalid tolerance")
        values["event_radius"] = (
            (2.0 * lipschitz_f * t + epsilon_prime - epsilon) / epsilon * diameter
            + t
            + 2.0 * math.sqrt(epsilon / rho)
        )
        values["event_probability"] = sd_event_probability(sd_constant, n, m, t)
        values["markov"] = markov_distance_bound(sd_constant, n, t)
    return values


def theoretical_bounds(
    bc: BoundConstants,
    n: int,
    m: int,
    epsilon: float,
    rho: float,
    flavor: BoundFlavor,
    *,
    epsilon1: float | None = None,
    epsilon2: float = 0.0,
    epsilon_prime: float | None = None,
    sd_constant: float | None = None,
    lipschitz_f: float | None = None,
    t: float | None = None,
) -> BoundRecord:
    """Evaluate the bounds applicable to one experiment cell.

    Args:
        bc: Problem constants.
        n: Sample size per replication.
        m: Replication count.
        epsilon: Tolerance of the target set.
        rho: Proximal weight of the compromise problem.
        flavor: ``"saa-cost"`` bounds ``|theta_c - theta*|``; ``"saa-solution"``,
            ``"cutplane"`` and ``"sd"`` bound the pessimistic distance of the
            compromise decision to the ``epsilon``-optimal set.
        epsilon1: Cutting-plane termination tolerance, required for ``"cutplane"``.
        epsilon2: Augmentation tolerance of the cutting-plane models.
        epsilon_prime: SD augmentation tolerance, required for ``"sd"``.
        sd_constant: Order-of-magnitude constant ``K`` of the SD rate.
        lipschitz_f: Lipschitz constant ``L_f`` of the expected cost.
        t: Optional SD event level for the probability bounds.

    Returns:
        BoundRecord with keys ``expectation`` and ``variance`` plus
        flavor-specific extras (``tail_constant``, ``tau1``, ``tau2``,
        ``tau3``, ``event_radius``, ``event_probability``, ``markov``).

    Raises:
        ModelError: If a constant the flavor needs is missing ("insufficient
            declared constants") or tolerances are inconsistent.

    Example:
        >>> bc = BoundConstants(1.0, 1.0, 1.0, 1.0, 2**0.5, 2)
        >>> theoretical_bounds(bc, 100, 1, 0.1, 100.0, "saa-cost")["expectation"] > 0
        True
    """
    _check_cell(n, m, epsilon, rho)
    if flavor == "saa-cost":
        values = _saa_cost(bc, n, m)
    elif flavor == "saa-solution":
        values = _saa_solution(bc, n, m, epsilon, rho)
    elif flavor == "cutplane":
        if epsilon1 is None:
            raise ModelError("insufficient declared constants")
        if epsilon > epsilon1 or epsilon2 < 0.0:
            raise ModelError("invalid tolerance")
        tau1 = epsilon1 - epsilon
        tau2 = epsilon1 + (m - 1.0) / m * epsilon2 - epsilon
        slack = (tau1 + tau2) * bc.diameter / epsilon
        values = _saa_solution(bc, n, m, epsilon, rho, slack)
        values.update(tau1=tau1, tau2=tau2)
    elif flavor == "sd":
        if epsilon_prime is None or sd_constant is None or lipschitz_f is None:
            raise ModelError("insufficient declared constants")
        if epsilon_prime < epsilon:
            raise ModelError("invalid tolerance")
        values = _sd(bc, n, m, epsilon, rho, epsilon_prime, sd_constant, lipschitz_f, t)
    else:
        raise ModelError(f"unknown bound flavor {flavor!r}")
    return BoundRecord(flavor=flavor, n=n, m=m, values=values)
