"""Tests for Kelley's method, certificates and model augmentation."""

import numpy as np
import pytest

from compromise.cutplane import (
    CutPlaneConfig,
    PiecewiseLinearModel,
    audit_outer_approximation,
    augment_model,
    run_cutting_plane,
    verify_certificate,
)
from compromise.errors import ModelError, SolverError
from compromise.model import make_box, random_points, sample_scenarios
from compromise.problems import newsvendor
from compromise.saa import build_saa
from tests.qp.helpers import AbsoluteValue, HalfSquaredDistance

_SQUARE = make_box([0.0, 0.0], [1.0, 1.0])


def _newsvendor_instances(count, n=15):
    program = newsvendor()
    return [
        build_saa(program, sample_scenarios(program.scenarios, n, 11, i, (n, count, 0)))
        for i in range(count)
    ]


# ---------------------------------------------------------------------------
# Configuration and models
# ---------------------------------------------------------------------------


class TestCutPlaneConfig:
    def test_epsilon1_must_be_positive(self):
        with pytest.raises(ModelError, match="epsilon1 must be positive"):
            CutPlaneConfig(epsilon1=0.0)

    def test_epsilon2_must_be_nonnegative(self):
        with pytest.raises(ModelError, match="epsilon2"):
            CutPlaneConfig(epsilon2=-1.0)

    def test_iteration_cap(self):
        with pytest.raises(ModelError, match="max_iterations"):
            CutPlaneConfig(max_iterations=0)


class TestPiecewiseLinearModel:
    def test_value_and_subgradient(self):
        model = PiecewiseLinearModel(
            make_box([-1.0], [1.0]), np.zeros(2), np.array([[1.0], [-1.0]])
        )
        assert model.value(np.array([-0.5])) == pytest.approx(0.5)
        np.testing.assert_allclose(model.subgradient(np.array([-0.5])), [-1.0])
        assert model.size == 2


# ---------------------------------------------------------------------------
# Kelley runs
# ---------------------------------------------------------------------------


class TestRunCuttingPlane:
    def test_polyhedral_oracle_converges(self):
        oracle = AbsoluteValue(_SQUARE, np.array([0.25, 0.75]))
        result = run_cutting_plane(oracle, CutPlaneConfig(epsilon1=1e-6))
        assert result.gap <= 1e-6
        assert oracle.value(result.point) <= 1e-6 + 1e-9
        assert result.lower_bound <= oracle.value(result.point) + 1e-12
        assert result.evaluated_points.shape[0] == result.iterations + 1

    def test_certificate_verifies(self):
        oracle = HalfSquaredDistance(_SQUARE, np.array([0.4, 0.6]))
        result = run_cutting_plane(oracle, CutPlaneConfig(epsilon1=1e-3))
        assert verify_certificate(oracle, result.model, result.point, 1e-3)
        assert oracle.value(result.point) <= 1e-3 + 1e-9

    def test_model_is_an_outer_approximation(self):
        oracle = HalfSquaredDistance(_SQUARE, np.array([0.4, 0.6]))
        result = run_cutting_plane(oracle, CutPlaneConfig(epsilon1=1e-3))
        points = random_points(_SQUARE, np.random.default_rng(0), 100)
        assert audit_outer_approximation(oracle, result.model, points).passed

    def test_certificate_rejects_a_moved_point(self):
        oracle = HalfSquaredDistance(_SQUARE, np.array([0.4, 0.6]))
        result = run_cutting_plane(oracle, CutPlaneConfig(epsilon1=1e-3))
        assert not verify_certificate(oracle, result.model, np.array([1.0, 0.0]), 1e-3)

    def test_iteration_cap_reached(self):
        oracle = HalfSquaredDistance(_SQUARE, np.array([0.4, 0.6]))
        with pytest.raises(SolverError, match="termination condition unmet"):
            run_cutting_plane(oracle, CutPlaneConfig(epsilon1=1e-9, max_iterations=1))

    def test_sample_average_oracle(self):
        instance = _newsvendor_instances(1)[0]
        result = run_cutting_plane(instance, CutPlaneConfig(epsilon1=1e-6), sample_id="s")
        assert result.model.sample_id == "s"
        assert instance.value(result.point) - result.lower_bound <= 1e-6 + 1e-9


# ---------------------------------------------------------------------------
# Augmentation
# ---------------------------------------------------------------------------


class TestAugmentModel:
    def test_every_model_gains_one_cut_per_anchor(self):
        instances = _newsvendor_instances(3)
        config = CutPlaneConfig(epsilon1=1e-4)
        runs = [run_cutting_plane(inst, config) for inst in instances]
        anchors = [run.point for run in runs]
        augmented = augment_model([r.model for r in runs], anchors, instances, epsilon2=0.01)
        for run, model in zip(runs, augmented, strict=True):
            assert model.size == run.model.size + 3
            assert [record.source for record in model.augmentations] == [0, 1, 2]

    def test_added_cuts_touch_the_sample_average(self):
        instances = _newsvendor_instances(2)
        config = CutPlaneConfig(epsilon1=1e-4)
        runs = [run_cutting_plane(inst, config) for inst in instances]
        anchors = [run.point for run in runs]
        augmented = augment_model([r.model for r in runs], anchors, instances, epsilon2=0.05)
        for model, instance in zip(augmented, instances, strict=True):
            added = model.intercepts[-2:] + model.slopes[-2:] @ anchors[1]
            assert added[1] == pytest.approx(instance.value(anchors[1]) - 0.05)
            assert model.value(anchors[1]) <= instance.value(anchors[1]) + 1e-9

    def test_anchor_outside_region(self):
        instances = _newsvendor_instances(1)
        run = run_cutting_plane(instances[0], CutPlaneConfig(epsilon1=1e-4))
        with pytest.raises(ModelError, match="anchor outside region"):
            augment_model([run.model], [np.array([20.0, 0.0])], instances)

    def test_negative_slack_rejected(self):
        instances = _newsvendor_instances(1)
        run = run_cutting_plane(instances[0], CutPlaneConfig(epsilon1=1e-4))
        with pytest.raises(ModelError, match="epsilon2"):
            augment_model([run.model], [run.point], instances, epsilon2=-1.0)
