"""Problem documents in JSON or TOML.

A document describes the region, the finite scenario atoms, the cost family
and the declared constants. Field names are listed in ``SPECIFICATION.md``.
"""

import json
import tomllib
from pathlib import Path
from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from compromise.errors import ModelError
from compromise.model.costs import NewsvendorCost, QuadraticCost, linear_cost, squared_distance_cost
from compromise.model.region import make_box, make_polyhedron
from compromise.model.sampling import finite_space
from compromise.model.types import (
    CostFunction,
    DeclaredConstants,
    FeasibleRegion,
    StochasticProgram,
)
from compromise.problems import resolve_problem, sqqp_program
from compromise.sd.types import SqqpProblem

__all__ = ["ProblemDocument", "build_problem", "load_problem", "parse_problem"]


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class BoxDocument(_Document):
    kind: Literal["box"]
    lower: list[float]
    upper: list[float]


class PolyhedronDocument(_Document):
    kind: Literal["polyhedron"]
    a: list[list[float]]
    b: list[float]
    diameter: float | None = None


class ScenarioDocument(_Document):
    atoms: list[list[float]] = Field(min_length=1)
    probabilities: list[float] | None = None


class QuadraticCostDocument(_Document):
    family: Literal["quadratic"]
    q: list[list[float]]
    c: list[float]
    l: list[list[float]]  # noqa: E741
    r: list[list[float]]


class SquaredDistanceDocument(_Document):
    family: Literal["squared-distance"]


class LinearCostDocument(_Document):
    family: Literal["linear"]


class NewsvendorDocument(_Document):
    family: Literal["newsvendor"]
    holding: list[float]
    backorder: list[float]


class SqqpDocument(_Document):
    """Second-stage data; scenarios stack ``e`` and ``C`` row by row."""

    family: Literal["sqqp"]
    q: list[list[float]]
    c: list[float]
    p: list[list[float]]
    d: list[float]
    d_matrix: list[list[float]]


class ConstantsDocument(_Document):
    lipschitz: float = Field(ge=0.0)
    bound: float = Field(ge=0.0)
    holder: float = Field(default=1.0, gt=0.0, le=1.0)
    recourse_lipschitz: float = Field(default=0.0, ge=0.0)


CostDocument = Annotated[
    QuadraticCostDocument
    | SquaredDistanceDocument
    | LinearCostDocument
    | NewsvendorDocument
    | SqqpDocument,
    Field(discriminator="family"),
]


class ProblemDocument(_Document):
    """Top-level problem document.

    Either ``builtin`` names a desk problem, or ``region``, ``scenarios``,
    ``cost`` and ``constants`` describe one.
    """

    name: str = "problem"
    builtin: str | None = None
    region: Annotated[BoxDocument | PolyhedronDocument, Field(discriminator="kind")] | None = None
    scenarios: ScenarioDocument | None = None
    cost: CostDocument | None = None
    constants: ConstantsDocument | None = None

    @model_validator(mode="after")
    def _complete(self) -> "ProblemDocument":
        parts = (self.region, self.scenarios, self.cost, self.constants)
        if self.builtin is None and any(part is None for part in parts):
            raise ValueError("region, scenarios, cost and constants are required")
        return self


def _region(document: BoxDocument | PolyhedronDocument) -> FeasibleRegion:
    if isinstance(document, BoxDocument):
        return make_box(document.lower, document.upper)
    return make_polyhedron(document.a, document.b, diameter=document.diameter)


def _cost(document: CostDocument, dimension: int) -> CostFunction:
    if isinstance(document, QuadraticCostDocument):
        return QuadraticCost(
            q_matrix=np.asarray(document.q, dtype=np.float64),
            c_vector=np.asarray(document.c, dtype=np.float64),
            l_matrix=np.asarray(document.l, dtype=np.float64),
            r_matrix=np.asarray(document.r, dtype=np.float64),
        )
    if isinstance(document, SquaredDistanceDocument):
        return squared_distance_cost(dimension)
    if isinstance(document, LinearCostDocument):
        return linear_cost(dimension)
    if isinstance(document, NewsvendorDocument):
        return NewsvendorCost(
            holding=np.asarray(document.holding, dtype=np.float64),
            backorder=np.asarray(document.backorder, dtype=np.float64),
        )
    raise ModelError("two-stage costs are built from the sqqp section")


def build_problem(document: ProblemDocument) -> StochasticProgram:
    """Turn a validated document into a stochastic program."""
    if document.builtin is not None:
        return resolve_problem(document.builtin)
    assert document.region is not None and document.scenarios is not None
    assert document.cost is not None and document.constants is not None
    region = _region(document.region)
    scenarios = finite_space(document.scenarios.atoms, document.scenarios.probabilities)
    constants = DeclaredConstants(**document.constants.model_dump())
    cost = document.cost
    if isinstance(cost, SqqpDocument):
        problem = SqqpProblem(
            q_matrix=np.asarray(cost.q, dtype=np.float64),
            c_vector=np.asarray(cost.c, dtype=np.float64),
            region=region,
            p_matrix=np.asarray(cost.p, dtype=np.float64),
            d_vector=np.asarray(cost.d, dtype=np.float64),
            d_matrix=np.asarray(cost.d_matrix, dtype=np.float64),
            scenarios=scenarios,
        )
        return sqqp_program(problem, document.name, constants).program
    return StochasticProgram(
        name=document.name,
        region=region,
        scenarios=scenarios,
        cost=_cost(cost, region.dimension),
        constants=constants,
    )


def parse_problem(raw: dict[str, object]) -> StochasticProgram:
    """Validate a decoded document and build the program.

    Raises:
        ModelError: If validation fails.
    """
    try:
        document = ProblemDocument.model_validate(raw)
    except ValidationError as exc:
        raise ModelError(f"invalid problem document: {exc}") from exc
    return build_problem(document)


def load_problem(path: Path) -> StochasticProgram:
    """Read a ``.json`` or ``.toml`` problem document.

    Raises:
        ModelError: For unknown suffixes or invalid documents.
    """
    suffix = path.suffix.lower()
    if suffix == ".toml":
        with path.open("rb") as handle:
            raw = tomllib.load(handle)
    elif suffix == ".json":
        raw = json.loads(path.read_text(encoding="utf-8"))
    else:
        raise ModelError(f"unsupported problem document {path.name}")
    return parse_problem(raw)
