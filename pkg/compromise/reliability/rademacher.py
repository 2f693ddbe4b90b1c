"""Rademacher averages of finite sets and gridded function classes."""

import itertools
import logging
import math
from typing import Literal

import numpy as np

from compromise.errors import ModelError
from compromise.model.region import region_grid
from compromise.model.types import Matrix, SampleSet, StochasticProgram
from compromise.reliability.constants import bound_constants, constant_nf
from compromise.reliability.types import RademacherEstimate

__all__ = ["finite_set_bound", "rademacher_finite", "rademacher_function_class"]

_logger = logging.getLogger(__name__)

# --- Enumeration limits ------------------------------------------------------

_MAX_EXACT_LENGTH = 20
_SIGN_CHUNK = 1 << 14

RademacherMode = Literal["exact", "monte-carlo"]


def finite_set_bound(vectors: Matrix) -> float:
    """``max_j ||a_j|| sqrt(2 ln(2N)) / n`` for ``N`` vectors of length ``n``."""
    a = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    count, length = a.shape
    return float(np.linalg.norm(a, axis=1).max() * math.sqrt(2.0 * math.log(2.0 * count)) / length)


def _sup_over_set(signs: Matrix, a: Matrix) -> np.ndarray:
    return np.abs(signs @ a.T).max(axis=1) / a.shape[1]


def _exact(a: Matrix) -> float:
    length = a.shape[1]
    if length > _MAX_EXACT_LENGTH:
        raise ModelError("enumeration too large")
    patterns = itertools.product((-1.0, 1.0), repeat=length)
    total = 0.0
    while chunk := list(itertools.islice(patterns, _SIGN_CHUNK)):
        total += float(_sup_over_set(np.array(chunk), a).sum())
    return total / 2.0**length


def rademacher_finite(
    vectors: Matrix,
    mode: RademacherMode = "exact",
    *,
    draws: int = 2000,
    seed: int = 0,
) -> RademacherEstimate:
    """``E_sigma sup_a (1/n) |sum_i sigma_i a_i|`` for a finite set of vectors.

    Args:
        vectors: ``(N, n)`` array, one vector per row.
        mode: ``"exact"`` enumerates all ``2^n`` sign patterns;
            ``"monte-carlo"`` averages ``draws`` seeded sign patterns.
        draws: Monte Carlo sample count.
        seed: Monte Carlo seed.

    Returns:
        RademacherEstimate with the finite-set bound as ``upper_bound``.

    Raises:
        ModelError: If exact mode is asked for ``n > 20`` ("enumeration too large").

    Example:
        >>> rademacher_finite(np.array([[1.0, 1.0]])).value
        0.5
    """
    a = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    if a.size == 0:
        raise ModelError("empty vector set")
    bound = finite_set_bound(a)
    if mode == "exact":
        return RademacherEstimate(_exact(a), 0.0, "exact", bound)
    if draws < 2:
        raise ModelError("at least two Monte Carlo draws required")
    rng = np.random.Generator(np.random.Philox(seed))
    signs = rng.choice((-1.0, 1.0), size=(draws, a.shape[1]))
    values = _sup_over_set(signs, a)
    stderr = float(np.std(values, ddof=1) / math.sqrt(draws))
    return RademacherEstimate(float(values.mean()), stderr, "monte-carlo", bound)


def rademacher_function_class(
    prob: StochasticProgram,
    samples: SampleSet,
    grid_step: float,
    mode: RademacherMode = "exact",
    *,
    draws: int = 2000,
    seed: int = 0,
    lam: float = 0.25,
) -> RademacherEstimate:
    """Rademacher average of ``{F(x, .) : x in X}`` on a sample, sup over a grid.

    The grid sup is a lower bound of the sup over the region. The reported
    ``upper_bound`` is ``N_F / n^lam`` from the declared constants.

    Raises:
        ModelError: If the region cannot be gridded or exact mode is asked
            for more than twenty samples.
    """
    grid = region_grid(prob.region, grid_step)
    xi = samples.realizations
    a = np.array([prob.cost.values(x, xi) for x in grid])
    estimate = rademacher_finite(a, mode, draws=draws, seed=seed)
    upper = constant_nf(bound_constants(prob, lam)) / samples.size**lam
    _logger.debug(
        "function-class average %.6g over %d grid points (upper %.6g)",
        estimate.value,
        grid.shape[0],
        upper,
    )
    return RademacherEstimate(estimate.value, estimate.stderr, estimate.mode, upper)
