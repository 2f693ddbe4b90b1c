"""Stochastic Decomposition for two-stage quadratic programs.

One scenario is drawn per iteration. Each iteration adds two minorants of
the running sample average of the recourse, one at the candidate and one at
the incumbent, rescales older minorants by ``t/k`` and solves a prox master
whose weight grows like ``(k + 1) / tau``.

Minorants for past scenarios reuse the dual supports seen so far: the
reduced dual is maximized over each stored support and the best feasible
``gamma`` is kept. Any ``gamma >= 0`` yields a valid lower bound, so the
resulting cuts stay below the sample average as long as the recourse value
is nonnegative.
"""

import logging
from dataclasses import dataclass

import numpy as np

from compromise.errors import InfeasibleError, ModelError
from compromise.model.sampling import sample_scenarios
from compromise.model.types import Matrix, ProbeReport, Vector
from compromise.qp import CutGroup, ProxMaster, solve_prox_master
from compromise.sd.recourse import reduce_dual, solve_recourse_dual
from compromise.sd.types import DualReduction, SdIterate, SdModel, SdResult, SqqpProblem

__all__ = ["SdState", "audit_minorants", "default_step", "run_sd"]

_logger = logging.getLogger(__name__)

# --- Algorithm controls ------------------------------------------------------

_DEFAULT_ETA = 0.2
_ACTIVE_MULTIPLIER = 1e-10
_SUPPORT_THRESHOLD = 1e-12
_PINV_RCOND = 1e-10


def default_step(problem: SqqpProblem) -> float:
    """``tau = 2 / theta_min(Q)``."""
    return 2.0 / float(np.linalg.eigvalsh(problem.q_matrix).min())


@dataclass
class _Minorant:
    """Sample-average minorant created at iteration ``created``."""

    intercept: float
    slope: Vector
    created: int


class SdState:
    """Mutable state of one SD run: samples, dual supports and minorants."""

    def __init__(self, problem: SqqpProblem, reduction: DualReduction) -> None:
        self.problem = problem
        self.reduction = reduction
        self.iteration = 0
        self._rhs: list[Vector] = []
        self._technology: list[Matrix] = []
        self._supports: dict[tuple[int, ...], Matrix] = {(): np.zeros((0, 0))}
        self.minorants: list[_Minorant] = [_Minorant(0.0, np.zeros(problem.n1), 1)]

    @property
    def support_count(self) -> int:
        return len(self._supports)

    def add_sample(self, xi: Vector) -> None:
        self.iteration += 1
        self._rhs.append(self.problem.rhs(xi))
        self._technology.append(self.problem.technology(xi))

    def exact_gamma(self, x: Vector, xi: Vector) -> Vector:
        """Solve the recourse dual exactly and remember its support.

        Raises:
            InfeasibleError: If the recourse is infeasible for this scenario.
        """
        try:
            solution = solve_recourse_dual(self.problem, self.reduction, x, xi)
        except InfeasibleError as exc:
            raise InfeasibleError(
                f"recourse infeasible for scenario {self.iteration} of the run"
            ) from exc
        support = tuple(int(i) for i in np.flatnonzero(solution.gamma > _SUPPORT_THRESHOLD))
        if support not in self._supports:
            block = self.reduction.h_matrix[np.ix_(support, support)]
            self._supports[support] = np.linalg.pinv(block, rcond=_PINV_RCOND, hermitian=True)
        return solution.gamma

    def build_minorant(self, x: Vector, current_gamma: Vector) -> _Minorant:
        """Average of dual cuts over all samples so far, tight for the newest one."""
        reduction = self.reduction
        rhs = np.asarray(self._rhs)
        technology = np.asarray(self._technology)
        g = rhs - np.einsum("kij,j->ki", technology, x)
        q = reduction.q_of(g)

        best_gamma = np.zeros_like(q)
        best_value = np.full(q.shape[0], -np.inf)
        for support, block_pinv in self._supports.items():
            gamma = np.zeros_like(q)
            if support:
                index = list(support)
                gamma[:, index] = np.maximum(q[:, index] @ block_pinv.T, 0.0)
            value = -0.5 * np.einsum("ki,ij,kj->k", gamma, reduction.h_matrix, gamma)
            value += np.sum(q * gamma, axis=1)
            better = value > best_value
            best_gamma[better] = gamma[better]
            best_value = np.maximum(best_value, value)
        best_gamma[-1] = current_gamma

        multipliers = reduction.multipliers(g, best_gamma)
        w = -reduction.d_vector + multipliers @ reduction.d_matrix + best_gamma
        intercepts = -0.5 * np.einsum("ki,ij,kj->k", w, reduction.p_inverse, w)
        intercepts += np.sum(multipliers * rhs, axis=1)
        slopes = -np.einsum("kij,ki->kj", technology, multipliers)
        return _Minorant(float(intercepts.mean()), slopes.mean(axis=0), self.iteration)

    def cuts(self, iteration: int | None = None) -> tuple[Vector, Matrix]:
        """Intercepts and slopes rescaled by ``created / iteration``."""
        k = self.iteration if iteration is None else iteration
        scale = np.array([m.created / k for m in self.minorants])
        intercepts = scale * np.array([m.intercept for m in self.minorants])
        slopes = scale[:, None] * np.vstack([m.slope for m in self.minorants])
        return intercepts, slopes

    def model_value(self, x: Vector, iteration: int | None = None) -> float:
        intercepts, slopes = self.cuts(iteration)
        return self.problem.first_stage(x) + float(np.max(intercepts + slopes @ x))

    def keep_active(self, multipliers: Vector) -> None:
        """Drop minorants the last master did not use; the zero cut always stays."""
        self.minorants = [self.minorants[0]] + [
            m
            for m, weight in zip(self.minorants[1:], multipliers[1:], strict=True)
            if weight > _ACTIVE_MULTIPLIER
        ]

    def terminal_model(self) -> SdModel:
        intercepts, slopes = self.cuts()
        return SdModel(
            q_matrix=self.problem.q_matrix,
            c_vector=self.problem.c_vector,
            intercepts=intercepts,
            slopes=slopes,
            iteration=self.iteration,
        )


def run_sd(
    problem: SqqpProblem,
    n_iters: int,
    tau: float | None = None,
    master_seed: int = 0,
    replication_index: int = 0,
    *,
    stream_key: tuple[int, ...] = (),
    eta: float = _DEFAULT_ETA,
) -> SdResult:
    """Run Stochastic Decomposition for ``n_iters`` iterations.

    Args:
        problem: Two-stage QP with nonnegative recourse values.
        n_iters: Iterations (and scenarios drawn), at least 2.
        tau: Initial step size; ``tau * theta_min(Q)`` must exceed 1.
            Defaults to ``2 / theta_min(Q)``.
        master_seed: Experiment master seed.
        replication_index: Stream index of this run.
        stream_key: Stream prefix, for example the experiment cell.
        eta: Fraction of the predicted decrease the candidate must realize
            to become the incumbent.

    Returns:
        SdResult with the final incumbent, terminal model and trace.

    Raises:
        ModelError: If ``n_iters < 2`` or ``tau`` is too small for ``Q``.
        InfeasibleError: If a recourse problem is infeasible mid-run.
    """
    if n_iters < 2:
        raise ModelError("SD needs at least 2 iterations")
    theta_min = float(np.linalg.eigvalsh(problem.q_matrix).min())
    step = default_step(problem) if tau is None else float(tau)
    if step * theta_min <= 1.0:
        raise ModelError("τ too small for Q")

    samples = sample_scenarios(
        problem.scenarios, n_iters, master_seed, replication_index, stream_key
    ).realizations
    state = SdState(problem, reduce_dual(problem))
    region = problem.region
    candidate = region.center.copy()
    incumbent = candidate.copy()
    trace: list[SdIterate] = []
    _logger.info("SD run %d started: %d iterations, tau=%.4g", replication_index, n_iters, step)

    for k in range(1, n_iters + 1):
        predicted = 0.0
        if k > 1:
            predicted = state.model_value(candidate) - state.model_value(incumbent)
        xi = samples[k - 1]
        state.add_sample(xi)
        candidate_gamma = state.exact_gamma(candidate, xi)
        incumbent_gamma = state.exact_gamma(incumbent, xi)
        candidate_cut = state.build_minorant(candidate, candidate_gamma)
        incumbent_cut = state.build_minorant(incumbent, incumbent_gamma)
        state.minorants.extend([candidate_cut, incumbent_cut])

        if k == 1:
            updated = True
        else:
            realized = state.model_value(candidate) - state.model_value(incumbent)
            updated = realized <= eta * predicted
        if updated:
            incumbent = candidate.copy()
        trace.append(
            SdIterate(
                iteration=k,
                candidate=candidate.copy(),
                incumbent=incumbent.copy(),
                incumbent_updated=updated,
                minorant_count=len(state.minorants),
                candidate_cut=(candidate_cut.intercept, candidate_cut.slope),
                incumbent_cut=(incumbent_cut.intercept, incumbent_cut.slope),
            )
        )
        if k == n_iters:
            break

        intercepts, slopes = state.cuts()
        master = ProxMaster(
            groups=(CutGroup(1.0, intercepts, slopes),),
            region=region,
            rho=(k + 1) / step,
            anchor=incumbent,
            q_matrix=problem.q_matrix,
            c_vector=problem.c_vector,
        )
        solution = solve_prox_master(master)
        state.keep_active(solution.multipliers)
        candidate = solution.point
        _logger.debug(
            "SD iteration %d: %d minorants, %d supports",
            k,
            len(state.minorants),
            state.support_count,
        )

    _logger.info("SD run %d finished", replication_index)
    return SdResult(
        incumbent=incumbent,
        model=state.terminal_model(),
        trace=tuple(trace),
        samples=samples,
        seed=master_seed,
        replication_index=replication_index,
        stream_key=tuple(stream_key),
    )


def audit_minorants(
    problem: SqqpProblem, result: SdResult, points: Matrix, tolerance: float = 1e-8
) -> ProbeReport:
    """Check that every rescaled minorant stays below the sample-average recourse.

    Args:
        problem: The program the run solved.
        result: SD output; its terminal model holds the rescaled minorants.
        points: Audit points, one per row.
        tolerance: Allowed excess of a minorant over the sample average.
    """
    reduction = reduce_dual(problem)
    model = result.model
    worst = -np.inf
    for x in points:
        average = float(
            np.mean(
                [solve_recourse_dual(problem, reduction, x, xi).value for xi in result.samples]
            )
        )
        worst = max(worst, float(np.max(model.intercepts + model.slopes @ x)) - average)
    report = ProbeReport("minorant validity", int(points.shape[0]), worst, tolerance)
    if not report.passed:
        _logger.warning("minorant audit failed: excess %.3e", worst)
    return report
