"""Tests for the built-in desk problems."""

import math

import numpy as np
import pytest

from compromise.errors import ModelError
from compromise.model import NewsvendorCost
from compromise.problems import newsvendor, problem_names, quad2, resolve_problem, sqqp2
from compromise.sd import SqqpCost


class TestRegistry:
    def test_names(self):
        assert problem_names() == ["newsvendor", "quad2", "sqqp2"]

    def test_resolve(self):
        assert resolve_problem("sqqp2").structure == "two-stage-SQQP"

    def test_unknown(self):
        with pytest.raises(ModelError, match="unknown problem 'quad3'"):
            resolve_problem("quad3")


class TestQuad2:
    def test_fixed_atoms_are_reproducible(self):
        np.testing.assert_array_equal(quad2().scenarios.atoms, quad2().scenarios.atoms)
        assert quad2().scenarios.size == 10

    def test_atoms_lie_in_the_unit_square(self):
        assert quad2().region.contains(quad2().scenarios.atoms[0])
        atoms = quad2().scenarios.atoms
        assert np.all((atoms >= 0.0) & (atoms <= 1.0))

    def test_explicit_atoms(self):
        program = quad2([[0.0, 0.0], [1.0, 1.0]])
        assert program.scenarios.size == 2
        np.testing.assert_allclose(program.scenarios.probabilities, [0.5, 0.5])

    def test_constants(self):
        constants = quad2().constants
        assert constants.lipschitz == pytest.approx(math.sqrt(2.0))
        assert constants.bound == 1.0


class TestSqqp2:
    def test_shapes(self):
        bundle = sqqp2()
        assert bundle.problem.scenarios.size == 15
        assert bundle.program.scenarios.dimension == 3
        assert isinstance(bundle.program.cost, SqqpCost)

    def test_recourse_is_feasible_on_the_square(self):
        problem = sqqp2().problem
        for x in ([0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]):
            for xi in problem.scenarios.atoms:
                assert problem.coupling(np.array(x), xi)[0] >= 0.5 - 1e-12

    def test_declared_constants(self):
        constants = sqqp2().program.constants
        assert (constants.lipschitz, constants.bound, constants.recourse_lipschitz) == (
            8.0,
            10.0,
            5.0,
        )

    def test_scenario_count(self):
        assert sqqp2(4).problem.scenarios.size == 4
        with pytest.raises(ModelError, match="scenario_count must be at least 1"):
            sqqp2(0)


class TestNewsvendor:
    def test_demands(self):
        program = newsvendor()
        atoms = program.scenarios.atoms
        assert atoms.shape == (12, 2)
        assert np.all((atoms >= 2.0) & (atoms <= 8.0))
        assert isinstance(program.cost, NewsvendorCost)

    def test_constants(self):
        constants = newsvendor().constants
        assert constants.lipschitz == pytest.approx(math.sqrt(13.0))
        assert constants.bound == pytest.approx(50.0)
