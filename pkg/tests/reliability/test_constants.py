"""Tests for the uniform bound constants."""

import math

import pytest

from compromise.errors import ModelError
from compromise.problems import quad2
from compromise.reliability import (
    BoundConstants,
    bound_constants,
    compound_bound,
    compound_lipschitz,
    constant_nf,
    constant_nh,
)

UNIT = BoundConstants(
    lipschitz=1.0, holder=1.0, bound=1.0, edge_length=1.0, diameter=1.0, dimension=1
)


class TestBoundConstants:
    def test_from_program(self):
        bc = bound_constants(quad2())
        assert bc.lipschitz == pytest.approx(math.sqrt(2.0))
        assert bc.bound == 1.0
        assert bc.holder == 1.0
        assert bc.edge_length == pytest.approx(1.0)
        assert bc.diameter == pytest.approx(math.sqrt(2.0))
        assert bc.dimension == 2
        assert bc.lam == 0.25

    def test_holder_exponent_range(self):
        with pytest.raises(ModelError, match="holder exponent"):
            BoundConstants(1.0, 0.0, 1.0, 1.0, 1.0, 1)

    def test_negative_constants(self):
        with pytest.raises(ModelError, match="nonnegative"):
            BoundConstants(1.0, 1.0, -1.0, 1.0, 1.0, 1)


class TestCompoundConstants:
    def test_lipschitz(self):
        assert compound_lipschitz(UNIT) == pytest.approx(4.0 * math.sqrt(2.0))

    def test_bound(self):
        assert compound_bound(UNIT) == pytest.approx(4.0)


class TestNf:
    def test_unit_constants(self):
        assert constant_nf(UNIT) == pytest.approx(3.03517, abs=1e-5)

    def test_grows_with_lipschitz(self):
        larger = BoundConstants(2.0, 1.0, 1.0, 1.0, 1.0, 1)
        assert constant_nf(larger) == pytest.approx(constant_nf(UNIT) + 1.0)

    @pytest.mark.parametrize("lam", [0.0, 0.5, 0.7])
    def test_exponent_out_of_range(self, lam):
        bc = BoundConstants(1.0, 1.0, 1.0, 1.0, 1.0, 1, lam=lam)
        with pytest.raises(ModelError, match="exponent out of range"):
            constant_nf(bc)


class TestNh:
    def test_unit_constants(self):
        assert constant_nh(UNIT) == pytest.approx(13.9227, abs=1e-4)

    def test_exponent_out_of_range(self):
        with pytest.raises(ModelError, match="exponent out of range"):
            constant_nh(BoundConstants(1.0, 1.0, 1.0, 1.0, 1.0, 1, lam=0.5))

    def test_zero_lipschitz_worked_value(self):
        bc = BoundConstants(0.0, 1.0, 1.0, 1.0, 1.0, 1)
        assert constant_nh(bc) == pytest.approx(11.5795, abs=1e-4)
