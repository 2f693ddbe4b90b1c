"""Seeded scenario sampling with one independent stream per replication.

Every stream is a Philox counter-based generator keyed by a
``SeedSequence(master_seed, spawn_key=(*stream_key, replication_index))``.
Streams for different replication indices (or cells) never overlap, and
reconstructing a stream from its key always yields the same draws.
"""

from dataclasses import dataclass

import numpy as np

from compromise.errors import ModelError
from compromise.model.types import Matrix, SampleSet, ScenarioSpace, Vector

__all__ = [
    "BoxSampler",
    "GaussianSampler",
    "finite_space",
    "sample_scenarios",
    "sampler_space",
    "stream_generator",
]

_PROBABILITY_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class BoxSampler:
    """Uniform scenarios on a box."""

    lower: Vector
    upper: Vector

    @property
    def dimension(self) -> int:
        return int(self.lower.size)

    def draw(self, rng: np.random.Generator, n: int) -> Matrix:
        return rng.uniform(self.lower, self.upper, size=(n, self.dimension))


@dataclass(frozen=True, eq=False)
class GaussianSampler:
    """Normal scenarios with mean ``mean`` and covariance ``covariance``."""

    mean: Vector
    covariance: Matrix

    @property
    def dimension(self) -> int:
        return int(self.mean.size)

    def draw(self, rng: np.random.Generator, n: int) -> Matrix:
        return rng.multivariate_normal(self.mean, self.covariance, size=n)


def finite_space(
    atoms: Matrix | list[list[float]], probabilities: Vector | list[float] | None = None
) -> ScenarioSpace:
    """Build a finite scenario space; equiprobable when no weights are given.

    An empty atom list is accepted here and rejected when sampled.

    Raises:
        ModelError: If probabilities are negative, misaligned or do not sum to one.
    """
    atom_array = np.asarray(atoms, dtype=np.float64)
    if atom_array.size == 0:
        dimension = int(atom_array.shape[1]) if atom_array.ndim == 2 else 0
        return ScenarioSpace(
            kind="finite",
            dimension=dimension,
            atoms=atom_array.reshape(0, dimension),
            probabilities=np.zeros(0),
        )
    atom_array = np.atleast_2d(atom_array)
    count = atom_array.shape[0]
    if probabilities is None:
        weights = np.full(count, 1.0 / count)
    else:
        weights = np.asarray(probabilities, dtype=np.float64).reshape(-1)
    if weights.size != count:
        raise ModelError("one probability per atom required")
    if np.any(weights < 0.0) or abs(float(weights.sum()) - 1.0) > _PROBABILITY_TOLERANCE:
        raise ModelError("atom probabilities must be nonnegative and sum to 1")
    return ScenarioSpace(
        kind="finite",
        dimension=int(atom_array.shape[1]),
        atoms=atom_array,
        probabilities=weights,
    )


def sampler_space(sampler: BoxSampler | GaussianSampler) -> ScenarioSpace:
    """Wrap a seeded sampler as a scenario space."""
    return ScenarioSpace(kind="sampler", dimension=sampler.dimension, sampler=sampler)


def stream_generator(
    master_seed: int, replication_index: int, stream_key: tuple[int, ...] = ()
) -> np.random.Generator:
    """Return the generator of the stream identified by its key."""
    sequence = np.random.SeedSequence(
        master_seed, spawn_key=(*stream_key, replication_index)
    )
    return np.random.Generator(np.random.Philox(sequence))


def sample_scenarios(
    space: ScenarioSpace,
    n: int,
    master_seed: int,
    replication_index: int,
    stream_key: tuple[int, ...] = (),
) -> SampleSet:
    """Draw ``n`` i.i.d. scenarios from the replication's own stream.

    Args:
        space: Scenario space to sample from.
        n: Sample size, at least one.
        master_seed: Experiment master seed.
        replication_index: Index selecting the independent stream.
        stream_key: Optional prefix (for example the experiment cell) that
            separates otherwise equal replication indices.

    Returns:
        SampleSet with the draws and their provenance.

    Raises:
        ModelError: If ``n < 1`` or a finite space has no atoms.
    """
    if n < 1:
        raise ModelError("sample size must be at least 1")
    rng = stream_generator(master_seed, replication_index, stream_key)
    if space.kind == "finite":
        if space.atoms is None or space.probabilities is None or space.size == 0:
            raise ModelError("degenerate scenario space")
        indices = rng.choice(space.size, size=n, p=space.probabilities)
        draws = space.atoms[indices]
    else:
        if space.sampler is None:
            raise ModelError("degenerate scenario space")
        draws = np.asarray(space.sampler.draw(rng, n), dtype=np.float64)
    return SampleSet(
        realizations=draws,
        seed=master_seed,
        replication_index=replication_index,
        stream_key=tuple(stream_key),
    )
