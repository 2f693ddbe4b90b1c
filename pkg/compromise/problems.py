"""Desk problems with known ground truth.

``quad2`` is the squared-distance program on the unit square, ``sqqp2`` a
two-stage quadratic program with a two-dimensional first stage, and
``newsvendor`` a nonsmooth separable program for the cutting-plane path.
"""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from compromise.errors import ModelError
from compromise.model.costs import NewsvendorCost, squared_distance_cost
from compromise.model.region import make_box
from compromise.model.sampling import finite_space
from compromise.model.types import DeclaredConstants, Matrix, StochasticProgram
from compromise.sd.recourse import SqqpCost
from compromise.sd.types import SqqpProblem

__all__ = ["SqqpBundle", "newsvendor", "problem_names", "quad2", "resolve_problem", "sqqp2"]

# --- Fixed instance data -----------------------------------------------------

_ATOM_SEED = 20240617
_QUAD2_ATOMS = 10
_SQQP2_ATOMS = 15
_NEWSVENDOR_ATOMS = 12


def _fixed_generator(offset: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(_ATOM_SEED + offset)))


def quad2(atoms: Matrix | list[list[float]] | None = None) -> StochasticProgram:
    """``F(x, xi) = 1/2 ||x - xi||^2`` on ``[0, 1]^2`` with equiprobable atoms.

    Without explicit atoms, ten fixed points of the unit square are used.

    Example:
        >>> quad2([[0.0, 0.0], [1.0, 1.0]]).scenarios.size
        2
    """
    points = (
        _fixed_generator(0).uniform(0.0, 1.0, size=(_QUAD2_ATOMS, 2))
        if atoms is None
        else np.asarray(atoms, dtype=np.float64)
    )
    return StochasticProgram(
        name="quad2",
        region=make_box([0.0, 0.0], [1.0, 1.0]),
        scenarios=finite_space(points),
        cost=squared_distance_cost(2),
        constants=DeclaredConstants(lipschitz=float(np.sqrt(2.0)), bound=1.0, holder=1.0),
    )


@dataclass(frozen=True, eq=False)
class SqqpBundle:
    """A two-stage QP together with its stochastic-program view."""

    problem: SqqpProblem
    program: StochasticProgram


def sqqp_program(problem: SqqpProblem, name: str, constants: DeclaredConstants) -> SqqpBundle:
    """Expose a two-stage QP through the generic stochastic-program interface."""
    program = StochasticProgram(
        name=name,
        region=problem.region,
        scenarios=problem.scenarios,
        cost=SqqpCost.of(problem),
        constants=constants,
        structure="two-stage-SQQP",
    )
    return SqqpBundle(problem=problem, program=program)


def sqqp2(scenario_count: int = _SQQP2_ATOMS) -> SqqpBundle:
    """Two-stage QP with ``n1 = n2 = 2``, ``m2 = 1`` and ``Q = P = I``.

    The recourse is ``min 1/2 ||y||^2 + d'y  s.t.  y1 + y2 = g, y >= 0`` with
    ``d = (1.5, 0)``. Technology entries are uniform on ``[0, 1]`` and the
    right-hand side exceeds the row sum of ``C`` by ``U(0.5, 1.5)``, so
    ``g >= 0.5`` on the unit square and the recourse is always feasible
    with a nonnegative value.
    """
    if scenario_count < 1:
        raise ModelError("scenario_count must be at least 1")
    rng = _fixed_generator(1)
    technology = rng.uniform(0.0, 1.0, size=(scenario_count, 1, 2))
    rhs = technology.sum(axis=2) + rng.uniform(0.5, 1.5, size=(scenario_count, 1))
    atoms = np.hstack([rhs, technology.reshape(scenario_count, -1)])
    problem = SqqpProblem(
        q_matrix=np.eye(2),
        c_vector=np.array([0.2, 0.3]),
        region=make_box([0.0, 0.0], [1.0, 1.0]),
        p_matrix=np.eye(2),
        d_vector=np.array([1.5, 0.0]),
        d_matrix=np.array([[1.0, 1.0]]),
        scenarios=finite_space(atoms),
    )
    constants = DeclaredConstants(lipschitz=8.0, bound=10.0, holder=1.0, recourse_lipschitz=5.0)
    return sqqp_program(problem, "sqqp2", constants)


def newsvendor() -> StochasticProgram:
    """Two-item newsvendor on ``[0, 10]^2`` with twelve demand atoms."""
    demands = _fixed_generator(2).uniform(2.0, 8.0, size=(_NEWSVENDOR_ATOMS, 2))
    holding = np.array([1.0, 0.5])
    backorder = np.array([3.0, 2.0])
    return StochasticProgram(
        name="newsvendor",
        region=make_box([0.0, 0.0], [10.0, 10.0]),
        scenarios=finite_space(demands),
        cost=NewsvendorCost(holding=holding, backorder=backorder),
        constants=DeclaredConstants(
            lipschitz=float(np.linalg.norm(np.maximum(holding, backorder))),
            bound=float(np.sum(10.0 * np.maximum(holding, backorder))),
        ),
    )


_REGISTRY: dict[str, Callable[[], StochasticProgram]] = {
    "quad2": quad2,
    "sqqp2": lambda: sqqp2().program,
    "newsvendor": newsvendor,
}


def problem_names() -> list[str]:
    return sorted(_REGISTRY)


def resolve_problem(name: str) -> StochasticProgram:
    """Look up a built-in desk problem by name.

    Raises:
        ModelError: If the name is unknown.
    """
    try:
        factory = _REGISTRY[name]
    except KeyError as exc:
        raise ModelError(f"unknown problem {name!r}") from exc
    return factory()
