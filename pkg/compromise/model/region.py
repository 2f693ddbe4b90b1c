"""Construction, gridding and random probing of feasible regions."""

from collections.abc import Sequence

import numpy as np
from scipy.optimize import linprog

from compromise.errors import InfeasibleError, ModelError
from compromise.model.types import FeasibleRegion, Matrix, Vector

__all__ = [
    "make_box",
    "make_polyhedron",
    "random_points",
    "region_grid",
]

# --- Grid limits -------------------------------------------------------------

_MAX_GRID_DIMENSION = 3
_MAX_GRID_POINTS = 2_000_000
_MAX_REJECTION_ROUNDS = 1000

_LINPROG_METHOD = "highs"


def _enclosing_box(a_matrix: Matrix, b_vector: Vector) -> tuple[Vector, Vector]:
    """Bound every coordinate of ``{x : A x <= b}`` with two LPs."""
    dimension = a_matrix.shape[1]
    lower = np.empty(dimension)
    upper = np.empty(dimension)
    free = [(None, None)] * dimension
    for i in range(dimension):
        direction = np.zeros(dimension)
        direction[i] = 1.0
        for sign, target in ((1.0, lower), (-1.0, upper)):
            result = linprog(
                sign * direction,
                A_ub=a_matrix,
                b_ub=b_vector,
                bounds=free,
                method=_LINPROG_METHOD,
            )
            if result.status == 2:
                raise InfeasibleError("infeasible region")
            if result.status == 3:
                raise ModelError("feasible region must be bounded")
            if result.status != 0:
                raise InfeasibleError(f"region probe failed: {result.message}")
            target[i] = result.x[i]
    return lower, upper


def _chebyshev_center(a_matrix: Matrix, b_vector: Vector) -> Vector:
    """Centre of the largest ball inside the polyhedron."""
    norms = np.linalg.norm(a_matrix, axis=1)
    dimension = a_matrix.shape[1]
    cost = np.zeros(dimension + 1)
    cost[-1] = -1.0
    result = linprog(
        cost,
        A_ub=np.hstack([a_matrix, norms[:, None]]),
        b_ub=b_vector,
        bounds=[(None, None)] * dimension + [(0.0, None)],
        method=_LINPROG_METHOD,
    )
    if result.status != 0:
        raise InfeasibleError("infeasible region")
    return np.asarray(result.x[:dimension], dtype=np.float64)


def make_box(lower: Sequence[float] | Vector, upper: Sequence[float] | Vector) -> FeasibleRegion:
    """Build the box ``lower <= x <= upper``.

    Raises:
        ModelError: If the bounds have different shapes or ``lower > upper``.
    """
    lo = np.asarray(lower, dtype=np.float64).reshape(-1)
    hi = np.asarray(upper, dtype=np.float64).reshape(-1)
    if lo.shape != hi.shape or lo.size == 0:
        raise ModelError("box bounds must be nonempty vectors of equal length")
    if np.any(lo > hi):
        raise ModelError("box lower bound exceeds upper bound")
    return FeasibleRegion(
        kind="box",
        dimension=int(lo.size),
        lower=lo,
        upper=hi,
        a_matrix=None,
        b_vector=None,
        diameter=float(np.linalg.norm(hi - lo)),
        edge_length=float(np.max(hi - lo)),
        center=(lo + hi) / 2.0,
    )


def make_polyhedron(
    a_matrix: Sequence[Sequence[float]] | Matrix,
    b_vector: Sequence[float] | Vector,
    *,
    diameter: float | None = None,
) -> FeasibleRegion:
    """Build ``{x : A x <= b}`` after probing that it is nonempty and bounded.

    The diameter defaults to the diagonal of the enclosing box, a valid upper
    bound on pairwise distances. A tighter declared value may be supplied.

    Raises:
        InfeasibleError: If the polyhedron is empty.
        ModelError: If it is unbounded or the data are malformed.
    """
    a = np.atleast_2d(np.asarray(a_matrix, dtype=np.float64))
    b = np.asarray(b_vector, dtype=np.float64).reshape(-1)
    if a.shape[0] != b.size:
        raise ModelError("polyhedron rows do not match right-hand side")
    lower, upper = _enclosing_box(a, b)
    box_diameter = float(np.linalg.norm(upper - lower))
    return FeasibleRegion(
        kind="polyhedron",
        dimension=int(a.shape[1]),
        lower=lower,
        upper=upper,
        a_matrix=a,
        b_vector=b,
        diameter=box_diameter if diameter is None else float(diameter),
        edge_length=float(np.max(upper - lower)),
        center=_chebyshev_center(a, b),
    )


def region_grid(region: FeasibleRegion, step: float) -> Matrix:
    """Enumerate a regular grid over the region with spacing ``step``.

    Both bounds of the enclosing box are always included so that vertices of a
    box are grid points. Points outside a polyhedron are discarded.

    Raises:
        ModelError: If the dimension exceeds three or the grid is too large.
    """
    if region.dimension > _MAX_GRID_DIMENSION:
        raise ModelError("grid enumeration infeasible")
    if step <= 0.0:
        raise ModelError("grid step must be positive")
    axes = []
    for lo, hi in zip(region.lower, region.upper, strict=True):
        count = int(np.floor((hi - lo) / step + 1e-9)) + 1
        axis = lo + step * np.arange(count)
        if hi - axis[-1] > 1e-12:
            axis = np.append(axis, hi)
        axes.append(axis)
    total = int(np.prod([axis.size for axis in axes]))
    if total > _MAX_GRID_POINTS:
        raise ModelError("grid enumeration infeasible")
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.reshape(-1) for m in mesh], axis=1)
    if region.kind == "polyhedron":
        a_matrix, b_vector = region.inequalities()
        inside = np.all(points @ a_matrix.T <= b_vector + 1e-12, axis=1)
        points = points[inside]
    return points


def random_points(region: FeasibleRegion, rng: np.random.Generator, count: int) -> Matrix:
    """Draw ``count`` uniform points of the region by rejection from its box.

    Raises:
        ModelError: If the region has too little volume inside its box to be
            sampled ("rejection sampling exhausted").
    """
    lower, upper = region.lower, region.upper
    if region.kind == "box":
        return rng.uniform(lower, upper, size=(count, region.dimension))
    a_matrix, b_vector = region.inequalities()
    accepted: list[Matrix] = []
    found = 0
    for _ in range(_MAX_REJECTION_ROUNDS):
        batch = rng.uniform(lower, upper, size=(max(count, 64), region.dimension))
        batch = batch[np.all(batch @ a_matrix.T <= b_vector, axis=1)]
        accepted.append(batch)
        found += batch.shape[0]
        if found >= count:
            return np.vstack(accepted)[:count]
    raise ModelError("rejection sampling exhausted")
