"""Pessimistic distance between finite point sets and gridded sublevel sets."""

from collections.abc import Callable

import numpy as np
from scipy.spatial.distance import cdist

from compromise.errors import ModelError
from compromise.model.region import region_grid
from compromise.model.types import FeasibleRegion, Vector
from compromise.reliability.types import PointSet

__all__ = [
    "epsilon_sublevel_set",
    "pessimistic_distance",
    "sublevel_distance",
    "sublevel_distance_bound",
]


def pessimistic_distance(a: PointSet, b: PointSet) -> float:
    """``sup_{x in A} inf_{y in B} ||x - y||`` over finite sets.

    The distance is not symmetric: ``A`` is the candidate set and ``B`` the
    target. An empty ``A`` has distance zero.

    Raises:
        ModelError: If ``B`` is empty ("target set empty").

    Example:
        >>> origin = PointSet.singleton(np.zeros(2))
        >>> pessimistic_distance(PointSet(np.array([[0.0, 0.0], [3.0, 4.0]])), origin)
        5.0
    """
    if b.size == 0:
        raise ModelError("target set empty")
    if a.size == 0:
        return 0.0
    return float(cdist(a.points, b.points).min(axis=1).max())


def epsilon_sublevel_set(
    f: Callable[[Vector], float],
    region: FeasibleRegion,
    epsilon: float,
    grid_step: float,
) -> PointSet:
    """Grid points with ``f(x) <= min_grid f + epsilon``.

    Raises:
        ModelError: If ``epsilon < 0`` or the region is too large to grid
            ("grid enumeration infeasible").
    """
    if epsilon < 0.0:
        raise ModelError("epsilon must be nonnegative")
    grid = region_grid(region, grid_step)
    values = np.array([f(x) for x in grid])
    return PointSet(grid[values <= values.min() + epsilon], "grid-sublevel")


def sublevel_distance_bound(epsilon_prime: float, epsilon: float, diameter: float) -> float:
    """Bound ``((eps' - eps) / eps) D_X`` on the distance between two sublevel sets.

    Raises:
        ModelError: If ``epsilon <= 0`` or ``epsilon_prime < epsilon``
            ("invalid tolerance").

    Example:
        >>> sublevel_distance_bound(0.2, 0.1, 1.0)
        1.0
    """
    if epsilon <= 0.0 or epsilon_prime < epsilon:
        raise ModelError("invalid tolerance")
    return (epsilon_prime - epsilon) / epsilon * diameter


def sublevel_distance(point: Vector, value: float, threshold: float, target: PointSet) -> float:
    """Distance from one decision to a sublevel set known through its grid points.

    A decision whose objective ``value`` does not exceed ``threshold`` lies in
    the set and has distance zero. Otherwise the distance to the grid points
    is returned; it never underestimates the distance to the full set.
    """
    if value <= threshold:
        return 0.0
    return pessimistic_distance(PointSet.singleton(point), target)
