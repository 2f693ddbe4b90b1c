"""Tests for Rademacher averages."""

import math

import numpy as np
import pytest

from compromise.errors import ModelError
from compromise.model import SampleSet
from compromise.problems import quad2
from compromise.reliability import (
    bound_constants,
    constant_nf,
    finite_set_bound,
    rademacher_finite,
    rademacher_function_class,
)


class TestRademacherFinite:
    def test_single_pair(self):
        estimate = rademacher_finite(np.array([[1.0, 1.0]]))
        assert estimate.value == pytest.approx(0.5)
        assert estimate.mode == "exact"
        assert estimate.stderr == 0.0

    def test_single_entry(self):
        assert rademacher_finite(np.array([[3.0]])).value == pytest.approx(3.0)

    def test_exact_value_below_closed_form_bound(self):
        vectors = np.random.default_rng(1).normal(size=(5, 8))
        estimate = rademacher_finite(vectors)
        assert estimate.upper_bound == pytest.approx(finite_set_bound(vectors))
        assert estimate.value <= estimate.upper_bound

    def test_monte_carlo_agrees_with_enumeration(self):
        vectors = np.random.default_rng(2).normal(size=(4, 6))
        exact = rademacher_finite(vectors)
        sampled = rademacher_finite(vectors, "monte-carlo", draws=4000, seed=3)
        assert sampled.mode == "monte-carlo"
        assert sampled.stderr > 0.0
        assert sampled.value == pytest.approx(exact.value, abs=6 * sampled.stderr)

    def test_monte_carlo_is_seeded(self):
        vectors = np.array([[1.0, -2.0, 0.5]])
        first = rademacher_finite(vectors, "monte-carlo", draws=100, seed=9)
        second = rademacher_finite(vectors, "monte-carlo", draws=100, seed=9)
        assert first.value == second.value

    def test_enumeration_limit(self):
        with pytest.raises(ModelError, match="enumeration too large"):
            rademacher_finite(np.ones((1, 21)))

    def test_empty_set(self):
        with pytest.raises(ModelError, match="empty vector set"):
            rademacher_finite(np.zeros((0, 3)))

    def test_too_few_draws(self):
        with pytest.raises(ModelError, match="two Monte Carlo draws"):
            rademacher_finite(np.ones((1, 3)), "monte-carlo", draws=1)


class TestFiniteSetBound:
    def test_value(self):
        expected = math.sqrt(2.0) * math.sqrt(2.0 * math.log(2.0)) / 2.0
        assert finite_set_bound(np.array([[1.0, 1.0]])) == pytest.approx(expected)


class TestFunctionClass:
    def test_quadratic_class_on_a_grid(self):
        program = quad2()
        samples = SampleSet(program.scenarios.atoms[:4], 0, 0)
        estimate = rademacher_function_class(program, samples, 0.5)
        assert estimate.mode == "exact"
        assert 0.0 < estimate.value <= 1.0
        expected_upper = constant_nf(bound_constants(program)) / 4**0.25
        assert estimate.upper_bound == pytest.approx(expected_upper)
