"""Per-replication SAA construction, solves and variance estimates."""

import logging

import numpy as np

from compromise.cutplane.kelley import run_cutting_plane
from compromise.cutplane.types import CutPlaneConfig
from compromise.errors import ModelError, SolverError
from compromise.model.types import SampleSet, StochasticProgram, Vector
from compromise.qp import minimize_cut_model
from compromise.saa.types import ReplicationResult, SaaInstance

__all__ = ["build_saa", "compound_variance", "sample_variance", "solve_saa"]

_logger = logging.getLogger(__name__)

# --- Solve controls ----------------------------------------------------------

_EXACT_GAP = 1e-9
_MAX_KELLEY_ITERATIONS = 2000


def build_saa(problem: StochasticProgram, samples: SampleSet) -> SaaInstance:
    """Wrap a sample set as the replication's sample-average objective.

    Raises:
        ModelError: If the sample set is empty or its dimension is wrong.
    """
    if samples.size == 0:
        raise ModelError("sample set is empty")
    if samples.realizations.shape[1] != problem.scenarios.dimension:
        raise ModelError("sample dimension does not match scenario space")
    return SaaInstance(problem=problem, samples=samples)


def solve_saa(
    instance: SaaInstance,
    epsilon: float = 0.0,
    *,
    max_iterations: int = _MAX_KELLEY_ITERATIONS,
) -> ReplicationResult:
    """Return an ``epsilon``-optimal point of ``f_n``.

    Quadratic sample averages are minimized directly as one QP. Other costs
    go through Kelley's method with ``epsilon1 = epsilon`` (``1e-9`` when
    ``epsilon`` is zero); ``theta_n`` is then the model's lower bound.

    Raises:
        ModelError: If ``epsilon < 0``.
        SolverError: If the solver does not converge ("replication solve failed").
    """
    if epsilon < 0.0:
        raise ModelError("epsilon must be nonnegative")
    sample_id = instance.samples.identifier
    coefficients = instance.quadratic_coefficients()
    try:
        if coefficients is not None:
            q_matrix, c_vector, constant = coefficients
            solution = minimize_cut_model(
                [], instance.region, q_matrix=q_matrix, c_vector=c_vector, constant=constant
            )
            result = ReplicationResult(
                point=solution.point,
                value=solution.value,
                epsilon=epsilon,
                objective=instance.value(solution.point),
                iterations=solution.iterations,
                sample_id=sample_id,
            )
        else:
            config = CutPlaneConfig(
                epsilon1=epsilon if epsilon > 0.0 else _EXACT_GAP, max_iterations=max_iterations
            )
            run = run_cutting_plane(instance, config, sample_id=sample_id)
            result = ReplicationResult(
                point=run.point,
                value=run.lower_bound,
                epsilon=config.epsilon1,
                objective=instance.value(run.point),
                model=run.model,
                iterations=run.iterations,
                sample_id=sample_id,
            )
    except SolverError as exc:
        raise SolverError("replication solve failed") from exc
    _logger.debug("replication %s solved: theta_n=%.6g", sample_id, result.value)
    return result


def sample_variance(instance: SaaInstance, x: Vector) -> float:
    """Unbiased ``s_n^2(x)`` of the scenario costs.

    Raises:
        ModelError: If fewer than two samples are available ("variance undefined").
    """
    if instance.size < 2:
        raise ModelError("variance undefined")
    return float(np.var(instance.scenario_values(x), ddof=1))


def compound_variance(instance: SaaInstance, x: Vector, y: float | None = None) -> float:
    """``(1/(n-1)) sum_i (F(x, xi_i) - y)^2``, with ``y = f_n(x)`` by default.

    With the default ``y`` this is the sample variance written through the
    compound cost ``H(x, y, xi) = (F(x, xi) - y)^2``.

    Raises:
        ModelError: If fewer than two samples are available.
    """
    if instance.size < 2:
        raise ModelError("variance undefined")
    values = instance.scenario_values(x)
    centre = float(np.mean(values)) if y is None else y
    return float(np.sum((values - centre) ** 2) / (instance.size - 1))
