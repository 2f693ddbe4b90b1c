"""Experiment configuration documents."""

import hashlib
import json
import tomllib
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, ValidationError, model_validator

from compromise.errors import ModelError
from compromise.loader import ProblemDocument, build_problem, load_problem
from compromise.model.types import StochasticProgram
from compromise.problems import problem_names, resolve_problem

__all__ = ["ExperimentConfig", "config_hash", "load_config", "resolve_program"]

# --- Defaults ----------------------------------------------------------------

_HASH_LENGTH = 16
_RUN_ONLY_FIELDS = {"workers", "out"}

Flavor = Literal["saa", "cutplane", "sd"]
RhoRule = Literal["fixed", "kn", "kn2"]


class ExperimentConfig(BaseModel):
    """One reliability experiment over an ``(n, m)`` grid.

    Attributes:
        problem: Built-in problem name, path to a problem document, or an
            inline document.
        flavor: Replication solver and matching compromise problem.
        n_values: Sample sizes.
        m_values: Replication counts.
        macro_reps: Macro-replications per cell, at least two.
        rho_rule: ``fixed`` uses ``rho``; ``kn`` and ``kn2`` use ``rho_k n``
            and ``rho_k n^2``. Defaults to ``kn`` for ``saa``/``cutplane`` and
            ``kn2`` for ``sd``.
        rho: Prox weight under the ``fixed`` rule.
        rho_k: Multiplier of the ``kn`` and ``kn2`` rules.
        epsilon: Tolerance of the target set ``X*_eps``.
        epsilon1: Cutting-plane termination tolerance.
        epsilon2: Cutting-plane augmentation slack.
        epsilon_prime: SD augmentation tolerance.
        lam: Rate exponent of the uniform bounds.
        weight: Variance weight of the mean-variance objective.
        alpha: Confidence level of the margin of error.
        sd_constant: Order-of-magnitude constant of the SD rate.
        grid_step: Spacing of the ground-truth grid.
        seed: Master seed.
        workers: Threads solving replications; does not change results.
        out: Output root directory.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    problem: str | ProblemDocument
    flavor: Flavor = "saa"
    n_values: list[PositiveInt] = Field(min_length=1)
    m_values: list[PositiveInt] = Field(min_length=1)
    macro_reps: int = Field(default=10, ge=2)
    rho_rule: RhoRule | None = None
    rho: float | None = Field(default=None, gt=0.0)
    rho_k: float = Field(default=1.0, gt=0.0)
    epsilon: float = Field(default=0.1, gt=0.0)
    epsilon1: float = Field(default=0.1, gt=0.0)
    epsilon2: float = Field(default=0.0, ge=0.0)
    epsilon_prime: float = Field(default=0.1, gt=0.0)
    lam: float = Field(default=0.25, gt=0.0, lt=0.5)
    weight: float = Field(default=1.0, gt=0.0)
    alpha: float = Field(default=0.05, gt=0.0, lt=1.0)
    sd_constant: float = Field(default=1.0, gt=0.0)
    grid_step: float = Field(default=0.02, gt=0.0)
    seed: int = Field(default=0, ge=0)
    workers: PositiveInt = 1
    out: Path = Path("out")

    @model_validator(mode="after")
    def _consistent(self) -> "ExperimentConfig":
        if self.effective_rho_rule == "fixed" and self.rho is None:
            raise ValueError("fixed rho rule requires rho")
        if self.flavor == "cutplane" and self.epsilon > self.epsilon1:
            raise ValueError("cutplane bounds require epsilon <= epsilon1")
        if self.flavor == "sd" and self.epsilon > self.epsilon_prime:
            raise ValueError("sd bounds require epsilon <= epsilon_prime")
        return self

    @property
    def effective_rho_rule(self) -> RhoRule:
        if self.rho_rule is not None:
            return self.rho_rule
        return "kn2" if self.flavor == "sd" else "kn"

    def rho_for(self, n: int) -> float:
        """Prox weight of a cell with sample size ``n``."""
        rule = self.effective_rho_rule
        if rule == "fixed":
            assert self.rho is not None
            return self.rho
        if rule == "kn":
            return self.rho_k * n
        return self.rho_k * n * n

    def cells(self) -> list[tuple[int, int, int]]:
        """Every ``(n, m, rep)`` in run order."""
        return [
            (n, m, rep)
            for n in self.n_values
            for m in self.m_values
            for rep in range(self.macro_reps)
        ]


def config_hash(config: ExperimentConfig) -> str:
    """Short sha256 of the fields that determine results."""
    payload = config.model_dump(mode="json", exclude=_RUN_ONLY_FIELDS)
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:_HASH_LENGTH]


def load_config(path: Path, **overrides: Any) -> ExperimentConfig:
    """Read a ``.json`` or ``.toml`` experiment document.

    Keyword overrides (for example ``seed`` from the command line) replace
    document fields before validation.

    Raises:
        ModelError: For unreadable or invalid documents.
    """
    suffix = path.suffix.lower()
    if suffix == ".toml":
        with path.open("rb") as handle:
            raw = tomllib.load(handle)
    elif suffix == ".json":
        raw = json.loads(path.read_text(encoding="utf-8"))
    else:
        raise ModelError(f"unsupported config document {path.name}")
    raw.update({key: value for key, value in overrides.items() if value is not None})
    problem = raw.get("problem")
    if isinstance(problem, str) and problem not in problem_names():
        if not Path(problem).is_absolute():
            raw["problem"] = str((path.parent / problem).resolve())
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        raise ModelError(f"invalid experiment config: {exc}") from exc


def resolve_program(problem: str | ProblemDocument) -> StochasticProgram:
    """Turn the ``problem`` field into a program.

    Strings naming a built-in problem win over paths. ``load_config`` has
    already made document paths absolute.
    """
    if isinstance(problem, ProblemDocument):
        return build_problem(problem)
    if problem in problem_names():
        return resolve_problem(problem)
    return load_problem(Path(problem))
