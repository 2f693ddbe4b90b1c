"""Replication and aggregation pipeline over an experiment grid.

Every macro-replication of every ``(n, m)`` cell draws its ``m`` sample sets
from streams keyed by ``(n, m, rep)`` and the replication index, so results
do not depend on the worker count or on scheduling order.
"""

import logging
import math
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from compromise.cutplane import (
    CutPlaneConfig,
    PiecewiseLinearModel,
    augment_model,
    run_cutting_plane,
)
from compromise.errors import ModelError, RecordError, SolverError
from compromise.ground_truth import TrueObjectiveOracle, TrueOptimum, true_optimum
from compromise.model.sampling import sample_scenarios
from compromise.model.types import StochasticProgram, Vector
from compromise.qp import NonnegQP, ProxMaster, project_onto_region, write_qp_dump
from compromise.reliability import (
    BoundConstants,
    CellStatistics,
    MacroOutcome,
    PointSet,
    ReliabilityReport,
    bound_constants,
    build_report,
    constant_nf,
    constant_nh,
    sublevel_distance,
    summarize_cell,
    theoretical_bounds,
)
from compromise.reliability.types import BoundFlavor
from compromise.saa import (
    CompromiseResult,
    ReplicationResult,
    SaaInstance,
    algorithm_augmented_compromise,
    build_saa,
    exact_compromise,
    margin_of_error,
    margin_of_error_bound,
    sample_variance,
    solve_saa,
)
from compromise.sd import (
    SdModel,
    SqqpCost,
    SqqpProblem,
    augment_sd_model,
    lipschitz_constant_lf,
    run_sd,
    sd_compromise,
)
from harness.config import ExperimentConfig, config_hash, resolve_program
from harness.records import (
    CellRecord,
    CompromiseRecord,
    ReplicationRecord,
    RunRecord,
    cell_path,
    qp_dump_path,
    read_cell,
    read_run,
    write_cell,
    write_run,
)

__all__ = [
    "Experiment",
    "RunOutcome",
    "aggregate_cell",
    "prepare_experiment",
    "replicate_cell",
    "resume_aggregation",
    "run_experiment",
]

_logger = logging.getLogger(__name__)

_BOUND_FLAVOR: dict[str, BoundFlavor] = {
    "saa": "saa-solution",
    "cutplane": "cutplane",
    "sd": "sd",
}


@dataclass(frozen=True, eq=False)
class Experiment:
    """A configuration together with its program and ground truth.

    Attributes:
        config: The experiment configuration.
        program: The stochastic program under study.
        optimum: Brute-force optimum and ``X*_eps`` on the grid.
        target: ``X*_eps`` as a point set.
        threshold: ``f`` level bounding ``X*_eps``.
        sigma2: Variance of ``F(x*, xi)`` under the true distribution.
        constants: Constants of the uniform bounds.
    """

    config: ExperimentConfig
    program: StochasticProgram
    optimum: TrueOptimum
    target: PointSet
    threshold: float
    sigma2: float
    constants: BoundConstants

    @property
    def oracle(self) -> TrueObjectiveOracle:
        return TrueObjectiveOracle(self.program)


@dataclass(frozen=True, eq=False)
class RunOutcome:
    """What ``run_experiment`` produced.

    Attributes:
        report: Reliability statistics of every cell with enough successes.
        record: The run record written next to the cells.
        directory: Run directory ``out/<config hash>``.
        failures: Number of macro-replications that failed.
    """

    report: ReliabilityReport
    record: RunRecord
    directory: Path
    failures: int


def prepare_experiment(config: ExperimentConfig) -> Experiment:
    """Resolve the program and compute its ground truth once.

    Raises:
        ModelError: If the program has no exact expectation or cannot be gridded.
    """
    program = resolve_program(config.problem)
    optimum = true_optimum(program, config.grid_step, config.epsilon)
    space = program.scenarios
    assert space.atoms is not None and space.probabilities is not None
    costs = program.cost.values(optimum.minimizer, space.atoms)
    mean = float(space.probabilities @ costs)
    _logger.info(
        "ground truth for %s: theta*=%.6g, %d points in X*_eps",
        program.name,
        optimum.value,
        optimum.points.shape[0],
    )
    return Experiment(
        config=config,
        program=program,
        optimum=optimum,
        target=PointSet(optimum.points, "grid-sublevel"),
        threshold=max(optimum.value + config.epsilon, float(optimum.grid_values.min())),
        sigma2=float(space.probabilities @ (costs - mean) ** 2),
        constants=bound_constants(program, config.lam),
    )


# --- Replication -------------------------------------------------------------


def _sqqp(program: StochasticProgram) -> SqqpProblem:
    cost = program.cost
    if not isinstance(cost, SqqpCost):
        raise ModelError("sd flavor requires a two-stage SQQP problem")
    return cost.problem


def _instances(exp: Experiment, n: int, m: int, rep: int) -> list[SaaInstance]:
    seed = exp.config.seed
    key = (n, m, rep)
    return [
        build_saa(exp.program, sample_scenarios(exp.program.scenarios, n, seed, i, key))
        for i in range(m)
    ]


def _vector(values: Vector) -> list[float]:
    return [float(v) for v in np.asarray(values).ravel()]


def _replicate(
    exp: Experiment, instance: SaaInstance, n: int, m: int, rep: int, index: int
) -> ReplicationRecord:
    config = exp.config
    sample_id = instance.samples.identifier
    if config.flavor == "saa":
        result = solve_saa(instance, 0.0)
        return ReplicationRecord(
            index=index,
            sample_id=sample_id,
            point=_vector(result.point),
            value=result.value,
            objective=result.objective,
            epsilon=result.epsilon,
            iterations=result.iterations,
        )
    if config.flavor == "cutplane":
        settings = CutPlaneConfig(epsilon1=config.epsilon1, epsilon2=config.epsilon2)
        run = run_cutting_plane(instance, settings, sample_id=sample_id)
        return ReplicationRecord(
            index=index,
            sample_id=sample_id,
            point=_vector(run.point),
            value=run.lower_bound,
            objective=instance.value(run.point),
            epsilon=config.epsilon1,
            iterations=run.iterations,
            intercepts=_vector(run.model.intercepts),
            slopes=np.asarray(run.model.slopes).tolist(),
        )
    sd = run_sd(
        _sqqp(exp.program),
        n,
        master_seed=config.seed,
        replication_index=index,
        stream_key=(n, m, rep),
    )
    return ReplicationRecord(
        index=index,
        sample_id=sample_id,
        point=_vector(sd.incumbent),
        value=sd.model.evaluate(sd.incumbent),
        objective=instance.value(sd.incumbent),
        epsilon=config.epsilon_prime,
        iterations=len(sd.trace),
        intercepts=_vector(sd.model.intercepts),
        slopes=np.asarray(sd.model.slopes).tolist(),
        model_iteration=sd.model.iteration,
    )


def replicate_cell(
    exp: Experiment, n: int, m: int, rep: int, executor: ThreadPoolExecutor
) -> list[ReplicationRecord]:
    """Solve the ``m`` replications of one macro-replication in parallel.

    Results come back in replication order.
    """
    instances = _instances(exp, n, m, rep)
    return list(
        executor.map(
            lambda index: _replicate(exp, instances[index], n, m, rep, index), range(m)
        )
    )


# --- Aggregation ---------------------------------------------------------------


def _model_arrays(record: ReplicationRecord) -> tuple[np.ndarray, np.ndarray]:
    if record.intercepts is None or record.slopes is None:
        raise RecordError("record incomplete: replication model missing")
    return np.asarray(record.intercepts), np.asarray(record.slopes, dtype=np.float64)


def aggregate_cell(
    exp: Experiment,
    n: int,
    m: int,
    rep: int,
    replications: Sequence[ReplicationRecord],
    rho: float | None = None,
) -> CompromiseResult:
    """Solve the compromise problem of one macro-replication from its records.

    Sample sets are redrawn from their streams, never re-solved.

    Raises:
        RecordError: If the records lack the models the flavor needs.
    """
    if len(replications) != m:
        raise RecordError("record incomplete: replication count mismatch")
    config = exp.config
    weight = config.rho_for(n) if rho is None else rho
    region = exp.program.region
    anchors = [np.asarray(r.point, dtype=np.float64) for r in replications]
    if config.flavor == "saa":
        results = [
            ReplicationResult(
                point=anchor,
                value=r.value,
                epsilon=r.epsilon,
                objective=r.objective,
                iterations=r.iterations,
                sample_id=r.sample_id,
            )
            for anchor, r in zip(anchors, replications, strict=True)
        ]
        return exact_compromise(results, _instances(exp, n, m, rep), weight)
    if config.flavor == "cutplane":
        models = []
        for r in replications:
            intercepts, slopes = _model_arrays(r)
            models.append(PiecewiseLinearModel(region, intercepts, slopes, r.sample_id))
        augmented = augment_model(models, anchors, _instances(exp, n, m, rep), config.epsilon2)
        return algorithm_augmented_compromise(augmented, anchors, weight)
    problem = _sqqp(exp.program)
    augmented_sd = []
    for anchor, r in zip(anchors, replications, strict=True):
        intercepts, slopes = _model_arrays(r)
        model = SdModel(
            q_matrix=problem.q_matrix,
            c_vector=problem.c_vector,
            intercepts=intercepts,
            slopes=slopes,
            iteration=r.model_iteration or n,
        )
        augmented_sd.append(augment_sd_model(model, anchor, config.epsilon_prime))
    return sd_compromise(augmented_sd, region, weight)


def _compromise_record(result: CompromiseResult) -> CompromiseRecord:
    return CompromiseRecord(
        point=_vector(result.point),
        anchor=_vector(result.anchor),
        value=result.value,
        flavor=result.flavor,
        rho=result.rho,
        epsilon=result.epsilon,
        kkt_residual=result.kkt_residual,
    )


# --- Statistics ----------------------------------------------------------------


def _outcome(
    exp: Experiment, n: int, m: int, rep: int, point: Vector, value: float
) -> MacroOutcome:
    x = project_onto_region(np.asarray(point, dtype=np.float64), exp.program.region)
    delta = sublevel_distance(x, exp.oracle.value(x), exp.threshold, exp.target)
    margin = math.nan
    if n >= 2:
        variances = [sample_variance(inst, x) for inst in _instances(exp, n, m, rep)]
        margin = margin_of_error(variances, n, exp.config.alpha)
    return MacroOutcome(delta=delta, cost_error=abs(value - exp.optimum.value), margin=margin)


def _bounds(
    exp: Experiment, n: int, m: int, rho: float
) -> tuple[dict[str, float], dict[str, float], float]:
    config = exp.config
    bc = exp.constants
    delta_bounds: dict[str, float] = {}
    cost_bounds: dict[str, float] = {}
    margin_bound = math.nan
    try:
        extras: dict[str, float] = {}
        if config.flavor == "cutplane":
            extras = {"epsilon1": config.epsilon1, "epsilon2": config.epsilon2}
        elif config.flavor == "sd":
            lipschitz = lipschitz_constant_lf(
                _sqqp(exp.program), exp.program.constants.recourse_lipschitz
            )
            extras = {
                "epsilon_prime": config.epsilon_prime,
                "sd_constant": config.sd_constant,
                "lipschitz_f": lipschitz,
            }
        record = theoretical_bounds(
            bc, n, m, config.epsilon, rho, _BOUND_FLAVOR[config.flavor], **extras
        )
        delta_bounds = record.values
        if config.flavor == "saa":
            cost_bounds = theoretical_bounds(bc, n, m, config.epsilon, rho, "saa-cost").values
        if n >= 2:
            margin_bound = margin_of_error_bound(
                exp.sigma2,
                n,
                m,
                config.alpha,
                bound=bc.bound,
                n_f=constant_nf(bc),
                n_h=constant_nh(bc),
                lam=bc.lam,
            )
    except ModelError as exc:
        _logger.warning("bounds unavailable for n=%d m=%d: %s", n, m, exc)
    return delta_bounds, cost_bounds, margin_bound


def _report(
    exp: Experiment,
    outcomes: dict[tuple[int, int], list[MacroOutcome]],
    rhos: dict[tuple[int, int], float],
) -> ReliabilityReport:
    config = exp.config
    cells: list[CellStatistics] = []
    for (n, m), group in sorted(outcomes.items()):
        if len(group) < 2:
            _logger.warning("cell n=%d m=%d has %d successful macro-replications", n, m, len(group))
            continue
        delta_bounds, cost_bounds, margin_bound = _bounds(exp, n, m, rhos[(n, m)])
        cells.append(
            summarize_cell(
                config.flavor,
                n,
                m,
                group,
                delta_bounds=delta_bounds,
                cost_bounds=cost_bounds,
                margin_bound=margin_bound,
                weight=config.weight,
            )
        )
    return build_report(cells, config.weight)


# --- Entry points ----------------------------------------------------------------


def _failed_qp(exc: BaseException) -> NonnegQP | ProxMaster | None:
    current: BaseException | None = exc
    while current is not None:
        problem = getattr(current, "problem", None)
        if isinstance(problem, NonnegQP | ProxMaster):
            return problem
        current = current.__cause__
    return None


def _run_cell(
    exp: Experiment,
    n: int,
    m: int,
    rep: int,
    executor: ThreadPoolExecutor,
    directory: Path,
) -> CellRecord:
    started = time.perf_counter()
    replications: list[ReplicationRecord] = []
    try:
        replications = replicate_cell(exp, n, m, rep, executor)
        compromise = _compromise_record(aggregate_cell(exp, n, m, rep, replications))
        error = None
    except (ModelError, SolverError, RecordError) as exc:
        _logger.warning("cell n=%d m=%d rep=%d failed: %s", n, m, rep, exc)
        compromise, error = None, f"{type(exc).__name__}: {exc}"
        problem = _failed_qp(exc)
        if problem is not None:
            dump = qp_dump_path(directory, n, m, rep)
            write_qp_dump(problem, dump)
            _logger.warning("failing QP written to %s", dump)
    return CellRecord(
        n=n,
        m=m,
        rep=rep,
        flavor=exp.config.flavor,
        stream_key=[n, m, rep],
        replications=replications,
        compromise=compromise,
        seconds=time.perf_counter() - started,
        error=error,
    )


def _existing_cell(directory: Path, n: int, m: int, rep: int) -> CellRecord | None:
    if not cell_path(directory, n, m, rep).exists():
        return None
    try:
        record = read_cell(directory, n, m, rep)
    except RecordError:
        return None
    return record if record.error is None and record.compromise is not None else None


def run_experiment(config: ExperimentConfig) -> RunOutcome:
    """Run every cell, persist each one, and build the reliability report.

    Completed cells already present in the run directory are reused, so an
    interrupted run continues where it stopped. A failing cell is recorded
    with its error and the run moves on.
    """
    started = time.perf_counter()
    exp = prepare_experiment(config)
    digest = config_hash(config)
    directory = config.out / digest
    cells = config.cells()
    record = RunRecord(
        config=config,
        config_hash=digest,
        seed=config.seed,
        cells=[cell_path(directory, *cell).name for cell in cells],
    )
    write_run(directory, record)

    outcomes: dict[tuple[int, int], list[MacroOutcome]] = {}
    rhos: dict[tuple[int, int], float] = {}
    failures = 0
    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        for n, m, rep in cells:
            cell = _existing_cell(directory, n, m, rep)
            if cell is None:
                cell = _run_cell(exp, n, m, rep, executor, directory)
                write_cell(directory, cell)
            if cell.compromise is None:
                failures += 1
                continue
            outcomes.setdefault((n, m), []).append(
                _outcome(exp, n, m, rep, cell.compromise.point, cell.compromise.value)
            )
            rhos[(n, m)] = cell.compromise.rho
            _logger.info("cell n=%d m=%d rep=%d done in %.2fs", n, m, rep, cell.seconds)

    record = record.model_copy(update={"seconds": time.perf_counter() - started})
    write_run(directory, record)
    return RunOutcome(_report(exp, outcomes, rhos), record, directory, failures)


def resume_aggregation(directory: Path, rho: float | None = None) -> ReliabilityReport:
    """Recompute compromise decisions and statistics from stored replications.

    Args:
        directory: Run directory holding ``run.json`` and ``cells/``.
        rho: Optional prox weight replacing the configured rule.

    Raises:
        RecordError: If ``run.json`` or any cell is missing or corrupt
            ("record incomplete").
    """
    run = read_run(directory)
    exp = prepare_experiment(run.config)
    outcomes: dict[tuple[int, int], list[MacroOutcome]] = {}
    rhos: dict[tuple[int, int], float] = {}
    for n, m, rep in run.config.cells():
        cell = read_cell(directory, n, m, rep)
        if cell.error is not None:
            continue
        result = aggregate_cell(exp, n, m, rep, cell.replications, rho)
        outcomes.setdefault((n, m), []).append(_outcome(exp, n, m, rep, result.point, result.value))
        rhos[(n, m)] = result.rho
    return _report(exp, outcomes, rhos)
