"""Tests for empirical reliability statistics."""

import math

import numpy as np
import pytest

from compromise.errors import ModelError
from compromise.model import SampleSet, region_grid
from compromise.problems import quad2
from compromise.reliability import (
    PointSet,
    compound_sampling_error_sup,
    delta_statistics,
    empirical_delta_stats,
    fit_rate,
    mean_variance_objective,
    non_dominated,
    sampling_error_sup,
    variance_deviation_bound,
    variance_deviation_sup,
)


class TestDeltaStatistics:
    def test_two_runs(self):
        target = PointSet.singleton(np.zeros(1))
        runs = [PointSet.singleton(np.array([v])) for v in (0.1, 0.3)]
        stats = empirical_delta_stats(runs, target)
        assert stats.mean == pytest.approx(0.2)
        assert stats.variance == pytest.approx(0.02)
        assert stats.stderr == pytest.approx(0.1)
        assert stats.count == 2

    def test_solution_sets_use_their_farthest_point(self):
        target = PointSet.singleton(np.zeros(1))
        runs = [PointSet(np.array([[0.1], [0.5]])), PointSet(np.array([[0.3]]))]
        assert empirical_delta_stats(runs, target).mean == pytest.approx(0.4)

    def test_empty_run_list(self):
        with pytest.raises(ModelError, match="empty run list"):
            empirical_delta_stats([], PointSet.singleton(np.zeros(1)))
        with pytest.raises(ModelError, match="empty run list"):
            delta_statistics([])

    def test_single_run(self):
        with pytest.raises(ModelError, match="at least two macro-replications"):
            delta_statistics([0.5])


class TestFitRate:
    def test_power_law(self):
        ns = [4.0, 16.0, 64.0]
        fit = fit_rate(ns, [3.0 / math.sqrt(n) for n in ns])
        assert fit.slope == pytest.approx(-0.5)
        assert fit.intercept == pytest.approx(math.log(3.0))
        assert fit.r_squared == pytest.approx(1.0)

    def test_two_points(self):
        with pytest.raises(ModelError, match="cannot fit log rate"):
            fit_rate([1.0, 2.0], [1.0, 0.5])

    def test_nonpositive_values(self):
        with pytest.raises(ModelError, match="cannot fit log rate"):
            fit_rate([1.0, 2.0, 4.0], [1.0, 0.0, 0.5])


class TestMeanVariance:
    def test_objective(self):
        assert mean_variance_objective(0.2, 0.02, 5.0) == pytest.approx(0.3)

    def test_weight_must_be_positive(self):
        with pytest.raises(ModelError, match="weight must be positive"):
            mean_variance_objective(0.2, 0.02, 0.0)

    def test_non_dominated(self):
        pairs = [(1.0, 1.0), (0.5, 2.0), (2.0, 2.0), (1.0, 1.0)]
        assert non_dominated(pairs) == [0, 1, 3]


# ---------------------------------------------------------------------------
# Grid suprema
# ---------------------------------------------------------------------------


@pytest.fixture
def program():
    return quad2()


@pytest.fixture
def grid(program):
    return region_grid(program.region, 0.5)


class TestGridSuprema:
    def test_full_atom_sample_has_no_sampling_error(self, program, grid):
        samples = SampleSet(program.scenarios.atoms, 0, 0)
        assert sampling_error_sup(program, samples, grid) == pytest.approx(0.0, abs=1e-12)
        assert compound_sampling_error_sup(program, samples, grid) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_partial_sample_has_positive_error(self, program, grid):
        samples = SampleSet(program.scenarios.atoms[:3], 0, 0)
        assert sampling_error_sup(program, samples, grid) > 0.0
        assert compound_sampling_error_sup(program, samples, grid) > 0.0

    def test_variance_deviation_of_the_full_sample(self, program, grid):
        atoms = program.scenarios.atoms
        samples = SampleSet(atoms, 0, 0)
        # The unbiased estimator exceeds the population variance by 1/(n - 1).
        population = np.array([np.var(program.cost.values(x, atoms)) for x in grid])
        expected = float(population.max()) / (atoms.shape[0] - 1)
        assert variance_deviation_sup(program, samples, grid) == pytest.approx(expected)

    def test_variance_needs_two_samples(self, program, grid):
        samples = SampleSet(program.scenarios.atoms[:1], 0, 0)
        with pytest.raises(ModelError, match="variance undefined"):
            variance_deviation_sup(program, samples, grid)

    def test_variance_deviation_bound(self):
        assert variance_deviation_bound(1.0, 0.1, 0.2, 5) == pytest.approx(1.6)
        with pytest.raises(ModelError, match="variance undefined"):
            variance_deviation_bound(1.0, 0.1, 0.2, 1)
