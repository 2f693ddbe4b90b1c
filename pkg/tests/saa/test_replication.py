"""Tests for SAA instances, replication solves and variance estimates."""

import numpy as np
import pytest

from compromise.errors import ModelError
from compromise.model import SampleSet
from compromise.problems import quad2
from compromise.reliability import fit_rate
from compromise.saa import (
    build_saa,
    compound_variance,
    margin_of_error,
    margin_of_error_bound,
    normal_quantile,
    sample_variance,
    solve_saa,
)
from tests.saa.conftest import make_instances

_TWO_POINTS = np.array([[0.0, 0.0], [1.0, 1.0]])


class TestBuildSaa:
    def test_value_is_the_sample_mean(self):
        instance = build_saa(quad2(), SampleSet(_TWO_POINTS, 0, 0))
        assert instance.value(np.array([0.5, 0.5])) == pytest.approx(0.25)
        np.testing.assert_allclose(instance.subgradient(np.array([0.5, 0.5])), [0.0, 0.0])
        assert instance.size == 2

    def test_empty_sample(self):
        with pytest.raises(ModelError, match="sample set is empty"):
            build_saa(quad2(), SampleSet(np.zeros((0, 2)), 0, 0))

    def test_dimension_mismatch(self):
        with pytest.raises(ModelError, match="dimension"):
            build_saa(quad2(), SampleSet(np.zeros((3, 1)), 0, 0))


class TestSolveSaa:
    def test_quadratic_minimizer_is_the_sample_mean(self, quad2_instances):
        instance = quad2_instances[0]
        result = solve_saa(instance)
        mean = instance.samples.realizations.mean(axis=0)
        np.testing.assert_allclose(result.point, mean, atol=1e-7)
        assert result.value == pytest.approx(instance.value(result.point), abs=1e-9)
        assert result.model is None
        assert result.sample_id == instance.samples.identifier

    def test_cutting_plane_path_for_nonsmooth_costs(self, newsvendor_instances):
        result = solve_saa(newsvendor_instances[0])
        assert result.model is not None
        assert result.objective - result.value <= result.epsilon + 1e-12
        assert result.epsilon == pytest.approx(1e-9)

    def test_requested_tolerance_is_recorded(self, newsvendor_instances):
        result = solve_saa(newsvendor_instances[0], 1e-3)
        assert result.epsilon == pytest.approx(1e-3)
        assert result.objective - result.value <= 1e-3 + 1e-12

    def test_negative_epsilon(self, quad2_instances):
        with pytest.raises(ModelError, match="epsilon must be nonnegative"):
            solve_saa(quad2_instances[0], -1.0)


class TestVariance:
    def test_sample_variance_of_two_points(self):
        instance = build_saa(quad2(), SampleSet(_TWO_POINTS, 0, 0))
        # F((0, 0), .) is 0 and 1 on the two samples.
        assert sample_variance(instance, np.zeros(2)) == pytest.approx(0.5)

    def test_compound_variance_defaults_to_sample_variance(self, quad2_instances):
        instance = quad2_instances[1]
        x = np.array([0.3, 0.8])
        assert compound_variance(instance, x) == pytest.approx(sample_variance(instance, x))

    def test_compound_variance_at_a_fixed_level(self):
        instance = build_saa(quad2(), SampleSet(_TWO_POINTS, 0, 0))
        assert compound_variance(instance, np.zeros(2), 0.0) == pytest.approx(1.0)

    def test_single_sample(self):
        instance = build_saa(quad2(), SampleSet(_TWO_POINTS[:1], 0, 0))
        with pytest.raises(ModelError, match="variance undefined"):
            sample_variance(instance, np.zeros(2))
        with pytest.raises(ModelError, match="variance undefined"):
            compound_variance(instance, np.zeros(2))


class TestMarginOfError:
    def test_quantile(self):
        assert normal_quantile(0.05) == pytest.approx(1.959964, abs=1e-6)

    def test_invalid_confidence_level(self):
        with pytest.raises(ModelError, match="invalid confidence level"):
            normal_quantile(1.5)

    def test_single_replication(self):
        assert margin_of_error([4.0], 4, 0.05) == pytest.approx(1.959964, abs=1e-6)

    def test_averages_over_replications(self):
        assert margin_of_error([4.0, 4.0], 4, 0.05) == pytest.approx(
            np.sqrt(2.0) * 1.959964 / 2.0, abs=1e-6
        )

    def test_no_replications(self):
        with pytest.raises(ModelError, match="no replications"):
            margin_of_error([], 4)

    def test_bound_reduces_to_the_variance_term(self):
        value = margin_of_error_bound(1.0, 4, 1, 0.05, bound=0.0, n_f=0.0, n_h=0.0)
        assert value == pytest.approx(0.5 * 1.959964, abs=1e-6)

    def test_bound_requires_two_samples(self):
        with pytest.raises(ModelError, match="n >= 2"):
            margin_of_error_bound(1.0, 1, 1, 0.05, bound=1.0, n_f=1.0, n_h=1.0)


class TestMarginOfErrorRate:
    def test_shrinks_like_one_over_root_mn(self):
        program = quad2()
        sizes, margins = [], []
        for m in (1, 4):
            for n in (25, 100, 400):
                per_seed = []
                for seed in range(5):
                    instances = make_instances(program, n, m, seed)
                    variances = [
                        sample_variance(inst, solve_saa(inst).point) for inst in instances
                    ]
                    per_seed.append(margin_of_error(variances, n))
                sizes.append(m * n)
                margins.append(float(np.mean(per_seed)))
        fit = fit_rate(sizes, margins)
        assert -0.6 <= fit.slope <= -0.4
