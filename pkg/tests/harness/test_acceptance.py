"""Statistical acceptance runs on the desk problems.

These take minutes rather than seconds; deselect them with ``-m "not slow"``.
"""

import numpy as np
import pytest

from compromise.model import SampleSet, random_points, sample_scenarios
from compromise.problems import quad2, sqqp2
from compromise.qp import solve_nonneg_qp
from compromise.reliability import finite_set_bound, fit_rate, rademacher_finite, report_rows
from compromise.saa import build_saa, exact_compromise, solve_saa, stopping_gap, verify_stopping
from compromise.sd import reduce_dual, run_sd, solve_extensive_form, solve_recourse_dual
from compromise.sd import solve_recourse_primal
from harness.formatters import format_report_csv
from harness.runner import run_experiment
from tests.harness.helpers import small_config
from tests.qp.helpers import exhaustive_nonneg_qp, random_pd_qp

pytestmark = pytest.mark.slow


class TestRecourseDuality:
    def test_dual_and_primal_agree(self):
        problem = sqqp2().problem
        reduction = reduce_dual(problem)
        rng = np.random.default_rng(100)
        points = random_points(problem.region, rng, 1000)
        atoms = problem.scenarios.atoms
        for x, index in zip(points, rng.integers(0, atoms.shape[0], 1000), strict=True):
            dual = solve_recourse_dual(problem, reduction, x, atoms[index])
            primal = solve_recourse_primal(problem, x, atoms[index])
            assert abs(dual.value - primal.value) <= 1e-6


class TestQpKernel:
    def test_agrees_with_active_set_enumeration(self):
        rng = np.random.default_rng(200)
        for _ in range(200):
            qp = random_pd_qp(rng, int(rng.integers(1, 7)))
            solution = solve_nonneg_qp(qp)
            expected, value = exhaustive_nonneg_qp(qp)
            np.testing.assert_allclose(solution.point, expected, atol=1e-6)
            assert solution.value == pytest.approx(value, abs=1e-7)
            assert solution.kkt_residual <= 1e-8


class TestRademacher:
    def test_enumeration_below_the_finite_set_bound(self):
        rng = np.random.default_rng(300)
        for _ in range(100):
            vectors = rng.normal(size=(int(rng.integers(1, 6)), int(rng.integers(1, 13))))
            assert rademacher_finite(vectors).value <= finite_set_bound(vectors) + 1e-12

    def test_monte_carlo_within_three_standard_errors(self):
        rng = np.random.default_rng(301)
        vectors = rng.normal(size=(4, 10))
        exact = rademacher_finite(vectors).value
        sampled = rademacher_finite(vectors, "monte-carlo", draws=20000, seed=5)
        assert abs(sampled.value - exact) <= 3.0 * sampled.stderr


class TestStoppingRule:
    def test_shared_sample_set_needs_no_compromise(self):
        program = quad2()
        samples = sample_scenarios(program.scenarios, 50, 1, 0, (50, 5, 0))
        shared = SampleSet(samples.realizations, 1, 0, (50, 5, 0))
        instances = [build_saa(program, shared) for _ in range(5)]
        compromise = exact_compromise([solve_saa(i) for i in instances], instances, rho=50.0)
        assert stopping_gap(compromise) <= 1e-6
        assert verify_stopping(compromise, instances)

    def test_shared_sample_set_on_the_two_stage_qp(self):
        program = sqqp2().program
        samples = sample_scenarios(program.scenarios, 40, 2, 0, (40, 3, 0))
        shared = SampleSet(samples.realizations, 2, 0, (40, 3, 0))
        instances = [build_saa(program, shared) for _ in range(3)]
        compromise = exact_compromise([solve_saa(i) for i in instances], instances, rho=1e4)
        assert stopping_gap(compromise) <= 1e-6
        assert verify_stopping(compromise, instances)


class TestSdRate:
    def test_incumbent_error_falls_like_one_over_n(self):
        problem = sqqp2(20).problem
        x_star, _ = solve_extensive_form(problem)
        sizes = [50, 100, 200, 400]
        errors = [
            float(
                np.mean(
                    [
                        np.linalg.norm(
                            run_sd(problem, n, master_seed=s, stream_key=(n,)).incumbent - x_star
                        )
                        for s in range(30)
                    ]
                )
            )
            for n in sizes
        ]
        fit = fit_rate(sizes, errors)
        assert -1.3 <= fit.slope <= -0.8


class TestEnvelope:
    def test_empirical_means_stay_below_their_bounds(self, tmp_path):
        config = small_config(
            tmp_path,
            n_values=[25, 100, 400],
            m_values=[1, 10],
            macro_reps=200,
            epsilon=0.1,
            grid_step=0.05,
        )
        outcome = run_experiment(config)
        assert outcome.failures == 0
        assert len(outcome.report.cells) == 6
        for cell in outcome.report.cells:
            assert cell.delta.mean <= cell.delta_bounds["expectation"]
            assert cell.cost_error.mean <= cell.cost_bounds["expectation"]

    @pytest.mark.parametrize(("epsilon1", "epsilon2"), [(0.1, 0.0), (0.2, 0.05)])
    def test_cutting_plane_means_stay_below_the_inflated_bound(self, tmp_path, epsilon1, epsilon2):
        config = small_config(
            tmp_path,
            flavor="cutplane",
            n_values=[25, 100],
            m_values=[1, 10],
            macro_reps=50,
            epsilon=0.1,
            epsilon1=epsilon1,
            epsilon2=epsilon2,
            grid_step=0.05,
        )
        outcome = run_experiment(config)
        assert outcome.failures == 0
        assert len(outcome.report.cells) == 4
        for cell in outcome.report.cells:
            assert cell.delta.mean <= cell.delta_bounds["expectation"]
            assert cell.delta_bounds["tau2"] == pytest.approx(
                epsilon1 + (cell.m - 1) / cell.m * epsilon2 - 0.1
            )
            assert cell.cost_bounds == {}


class TestVarianceReduction:
    @pytest.mark.parametrize(
        ("problem", "changes"),
        [
            ("quad2", {"flavor": "saa"}),
            ("quad2", {"flavor": "cutplane", "epsilon1": 1e-3}),
            ("sqqp2", {"flavor": "sd", "epsilon_prime": 1e-3}),
        ],
        ids=["saa", "cutplane", "sd"],
    )
    def test_ten_replications_beat_one(self, tmp_path, problem, changes):
        config = small_config(
            tmp_path,
            problem=problem,
            n_values=[100],
            m_values=[1, 10],
            macro_reps=200,
            epsilon=1e-4,
            grid_step=0.02,
            **changes,
        )
        outcome = run_experiment(config)
        assert outcome.failures == 0
        single, pooled = outcome.report.cells
        assert (single.m, pooled.m) == (1, 10)
        assert pooled.delta.variance < single.delta.variance
        for cell in (single, pooled):
            assert cell.delta.variance <= cell.delta_bounds["variance"]


class TestDeterminism:
    def test_reruns_give_identical_reports(self, tmp_path):
        first = run_experiment(small_config(tmp_path / "first", macro_reps=5))
        second = run_experiment(small_config(tmp_path / "second", macro_reps=5, workers=4))
        assert format_report_csv(report_rows(first.report)) == format_report_csv(
            report_rows(second.report)
        )
