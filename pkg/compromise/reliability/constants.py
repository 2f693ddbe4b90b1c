"""Uniform constants of the Rademacher bounds.

Logarithms are natural.
"""

import math

from compromise.errors import ModelError
from compromise.model.types import StochasticProgram
from compromise.reliability.types import BoundConstants

__all__ = [
    "bound_constants",
    "compound_bound",
    "compound_lipschitz",
    "constant_nf",
    "constant_nh",
]

_SQRT_2_LN_2 = math.sqrt(2.0 * math.log(2.0))


def _check_exponent(lam: float) -> None:
    if not 0.0 < lam < 0.5:
        raise ModelError("exponent out of range")


def bound_constants(program: StochasticProgram, lam: float = 0.25) -> BoundConstants:
    """Collect the declared constants and region geometry of a program."""
    constants = program.constants
    region = program.region
    return BoundConstants(
        lipschitz=constants.lipschitz,
        holder=constants.holder,
        bound=constants.bound,
        edge_length=region.edge_length,
        diameter=region.diameter,
        dimension=region.dimension,
        lam=lam,
    )


def compound_lipschitz(bc: BoundConstants) -> float:
    """``L_H = 4 M_F sqrt(L_F^2 + 1)`` of ``H(x, y, xi) = (F(x, xi) - y)^2``."""
    return 4.0 * bc.bound * math.sqrt(bc.lipschitz**2 + 1.0)


def compound_bound(bc: BoundConstants) -> float:
    """``M_H = 4 M_F^2``."""
    return 4.0 * bc.bound**2


def constant_nf(bc: BoundConstants) -> float:
    """``N_F = L_F D^g p^(g/2) + M_F sqrt(2 ln 2) + M_F sqrt(p) / sqrt(g (1 - 2 lam) e)``.

    Raises:
        ModelError: If ``lam`` is outside ``(0, 1/2)`` ("exponent out of range").

    Example:
        >>> round(constant_nf(BoundConstants(1.0, 1.0, 1.0, 1.0, 1.0, 1)), 5)
        3.03517
    """
    _check_exponent(bc.lam)
    g, p = bc.holder, bc.dimension
    return (
        bc.lipschitz * bc.edge_length**g * p ** (g / 2.0)
        + bc.bound * _SQRT_2_LN_2
        + bc.bound * math.sqrt(p) / math.sqrt(g * (1.0 - 2.0 * bc.lam) * math.e)
    )


def constant_nh(bc: BoundConstants) -> float:
    """``N_H = L_H D sqrt(p+1) + M_H sqrt(2 ln 2) + M_F sqrt(p+1) / sqrt((1 - 2 lam) e)``.

    Raises:
        ModelError: If ``lam`` is outside ``(0, 1/2)``.
    """
    _check_exponent(bc.lam)
    lifted = math.sqrt(bc.dimension + 1.0)
    return (
        compound_lipschitz(bc) * bc.edge_length * lifted
        + compound_bound(bc) * _SQRT_2_LN_2
        + bc.bound * lifted / math.sqrt((1.0 - 2.0 * bc.lam) * math.e)
    )
