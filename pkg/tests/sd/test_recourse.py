"""Tests for the reduced recourse dual and two-stage costs."""

import math

import numpy as np
import pytest

from compromise.errors import InfeasibleError, ModelError
from compromise.model import finite_space, make_box, random_points, true_objective
from compromise.sd import (
    SqqpProblem,
    hessian_bound_m1,
    lipschitz_constant_lf,
    reduce_dual,
    solve_extensive_form,
    solve_recourse_dual,
    solve_recourse_primal,
)
from tests.sd.conftest import infeasible_problem


class TestSqqpProblem:
    def test_scenario_layout(self, bundle):
        problem = bundle.problem
        xi = problem.scenarios.atoms[0]
        assert problem.rhs(xi).shape == (1,)
        assert problem.technology(xi).shape == (1, 2)
        assert problem.n1 == 2 and problem.n2 == 2 and problem.m2 == 1

    def test_rejects_indefinite_hessian(self):
        with pytest.raises(ModelError, match="positive definite"):
            SqqpProblem(
                q_matrix=-np.eye(1),
                c_vector=np.zeros(1),
                region=make_box([0.0], [1.0]),
                p_matrix=np.eye(2),
                d_vector=np.zeros(2),
                d_matrix=np.array([[1.0, 1.0]]),
                scenarios=finite_space([[1.0, 0.0]]),
            )

    def test_rejects_wrong_scenario_dimension(self):
        with pytest.raises(ModelError, match="scenario dimension"):
            SqqpProblem(
                q_matrix=np.eye(1),
                c_vector=np.zeros(1),
                region=make_box([0.0], [1.0]),
                p_matrix=np.eye(2),
                d_vector=np.zeros(2),
                d_matrix=np.array([[1.0, 1.0]]),
                scenarios=finite_space([[1.0, 0.0, 0.0]]),
            )


class TestReduceDual:
    def test_projector_is_idempotent(self, bundle):
        reduction = reduce_dual(bundle.problem)
        np.testing.assert_allclose(reduction.phi @ reduction.phi, reduction.phi, atol=1e-12)

    def test_hessian_is_psd_with_rank_n2_minus_m2(self, bundle):
        reduction = reduce_dual(bundle.problem)
        eigenvalues = np.linalg.eigvalsh(reduction.h_matrix)
        assert eigenvalues.min() >= -1e-12
        assert int(np.sum(eigenvalues > 1e-10)) == 1

    def test_rank_deficient_matrix_rejected(self):
        problem = SqqpProblem(
            q_matrix=np.eye(1),
            c_vector=np.zeros(1),
            region=make_box([0.0], [1.0]),
            p_matrix=np.eye(2),
            d_vector=np.zeros(2),
            d_matrix=np.array([[1.0, 1.0], [2.0, 2.0]]),
            scenarios=finite_space([[1.0, 1.0, 0.0, 0.0]]),
        )
        with pytest.raises(ModelError, match="full row rank"):
            reduce_dual(problem)


class TestRecourse:
    def test_dual_matches_primal(self, bundle):
        problem = bundle.problem
        reduction = reduce_dual(problem)
        for x in (np.zeros(2), np.array([0.3, 0.8]), np.ones(2)):
            for xi in problem.scenarios.atoms[:5]:
                dual = solve_recourse_dual(problem, reduction, x, xi)
                primal = solve_recourse_primal(problem, x, xi)
                assert dual.value == pytest.approx(primal.value, abs=1e-6)
                np.testing.assert_allclose(dual.decision, primal.decision, atol=1e-5)
                np.testing.assert_allclose(
                    problem.d_matrix @ dual.decision, problem.coupling(x, xi), atol=1e-9
                )

    def test_recourse_values_are_nonnegative(self, bundle):
        problem = bundle.problem
        reduction = reduce_dual(problem)
        points = random_points(problem.region, np.random.default_rng(2), 20)
        for x in points:
            for xi in problem.scenarios.atoms:
                assert solve_recourse_dual(problem, reduction, x, xi).value >= -1e-10

    def test_identity_recourse_is_half_squared_norm(self):
        # D = P = I and d = 0 force y = g.
        problem = SqqpProblem(
            q_matrix=np.eye(1),
            c_vector=np.zeros(1),
            region=make_box([0.0], [1.0]),
            p_matrix=np.eye(2),
            d_vector=np.zeros(2),
            d_matrix=np.eye(2),
            scenarios=finite_space([[1.0, 2.0, 0.5, 0.25]]),
        )
        reduction = reduce_dual(problem)
        xi = problem.scenarios.atoms[0]
        for x in (np.zeros(1), np.array([0.4]), np.ones(1)):
            g = problem.coupling(x, xi)
            solution = solve_recourse_dual(problem, reduction, x, xi)
            assert solution.value == pytest.approx(0.5 * float(g @ g))
            np.testing.assert_allclose(solution.gamma, 0.0)
            np.testing.assert_allclose(solution.decision, g)

    def test_infeasible_recourse(self):
        problem = infeasible_problem()
        reduction = reduce_dual(problem)
        with pytest.raises(InfeasibleError, match="recourse infeasible"):
            solve_recourse_dual(problem, reduction, np.array([0.5]), problem.scenarios.atoms[0])

    def test_cost_subgradient_inequality(self, bundle):
        program = bundle.program
        rng = np.random.default_rng(4)
        xs = random_points(program.region, rng, 6)
        ys = random_points(program.region, rng, 6)
        for xi in program.scenarios.atoms[:4]:
            for x, y in zip(xs, ys, strict=True):
                linear = program.cost.value(x, xi) + program.cost.subgradient(x, xi) @ (y - x)
                assert program.cost.value(y, xi) >= linear - 1e-7


class TestExtensiveForm:
    def test_optimum_beats_every_grid_point(self, bundle):
        program = bundle.program
        x_star, value = solve_extensive_form(bundle.problem)
        assert true_objective(program, np.clip(x_star, 0.0, 1.0)) == pytest.approx(
            value, abs=1e-5
        )
        grid = np.stack(np.meshgrid(np.linspace(0, 1, 11), np.linspace(0, 1, 11)), -1)
        for x in grid.reshape(-1, 2):
            assert value <= true_objective(program, x) + 1e-6

    def test_sampler_space_rejected(self, bundle):
        from compromise.model import BoxSampler, sampler_space

        problem = bundle.problem
        sampled = SqqpProblem(
            q_matrix=problem.q_matrix,
            c_vector=problem.c_vector,
            region=problem.region,
            p_matrix=problem.p_matrix,
            d_vector=problem.d_vector,
            d_matrix=problem.d_matrix,
            scenarios=sampler_space(BoxSampler(np.zeros(3), np.ones(3))),
        )
        with pytest.raises(ModelError, match="finite scenarios"):
            solve_extensive_form(sampled)


class TestConstants:
    def test_hessian_bound_dominates_first_stage(self, bundle):
        assert hessian_bound_m1(bundle.problem) >= 1.0

    def test_lipschitz_constant_on_the_unit_square(self, bundle):
        expected = math.sqrt(2.0) + math.sqrt(0.2**2 + 0.3**2) + 5.0
        assert lipschitz_constant_lf(bundle.problem, 5.0) == pytest.approx(expected)

    def test_declared_lipschitz_constant_wins(self, bundle):
        assert lipschitz_constant_lf(bundle.problem, 5.0, declared=3.0) == 3.0
