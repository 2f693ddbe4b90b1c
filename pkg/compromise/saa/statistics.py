"""Margin-of-error statistics over replications."""

import math
from collections.abc import Sequence

from scipy.stats import norm

from compromise.errors import ModelError

__all__ = ["margin_of_error", "margin_of_error_bound", "normal_quantile"]


def normal_quantile(alpha: float) -> float:
    """``Z_{1 - alpha/2}`` of the standard normal.

    Raises:
        ModelError: If ``alpha`` is outside ``(0, 1)`` ("invalid confidence level").
    """
    if not 0.0 < alpha < 1.0:
        raise ModelError("invalid confidence level")
    return float(norm.ppf(1.0 - alpha / 2.0))


def margin_of_error(s2_list: Sequence[float], n: int, alpha: float = 0.05) -> float:
    """``(1/m) sqrt(sum_i s_i^2 / n) Z_{1 - alpha/2}`` over ``m`` replications.

    Example:
        >>> round(margin_of_error([4.0], 4, 0.05), 5)
        1.95996
    """
    z = normal_quantile(alpha)
    if n < 1:
        raise ModelError("sample size must be at least 1")
    if not s2_list:
        raise ModelError("no replications")
    return math.sqrt(sum(s2_list) / n) * z / len(s2_list)


def margin_of_error_bound(
    sigma2: float,
    n: int,
    m: int,
    alpha: float,
    *,
    bound: float,
    n_f: float,
    n_h: float,
    lam: float = 0.25,
) -> float:
    """Expected-margin bound built from the variance and the uniform constants.

    ``sqrt(sigma2/(mn) + (8 M_F N_H + 2 N_F)/(m n^(1+lam)) + 4 M_F^2/(mn(n-1))) Z``.

    Raises:
        ModelError: If ``n < 2`` or ``m < 1``.
    """
    if n < 2 or m < 1:
        raise ModelError("bound requires n >= 2 and m >= 1")
    z = normal_quantile(alpha)
    inner = (
        sigma2 / (m * n)
        + (8.0 * bound * n_h + 2.0 * n_f) / (m * n ** (1.0 + lam))
        + 4.0 * bound**2 / (m * n * (n - 1))
    )
    return math.sqrt(inner) * z
