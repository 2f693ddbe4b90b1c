"""Command-line entry point for reliability experiments.

Run an experiment, then recompute or re-emit its report::

    python main.py run --config experiment.toml --workers 4
    python main.py resume --record out/<hash> --rho 50
    python main.py report --report out/<hash>/report.json --out plots/
"""

import argparse
import logging
from collections.abc import Sequence
from pathlib import Path

from compromise.errors import ModelError, RecordError, SolverError
from compromise.reliability import report_rows
from harness.config import load_config
from harness.formatters import emit_plot_data, parse_report_json, write_report
from harness.runner import resume_aggregation, run_experiment

__all__ = ["build_parser", "main"]

_logger = logging.getLogger(__name__)

_EXIT_CELL_FAILURE = 1
_EXIT_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="logging threshold",
    )
    parser = argparse.ArgumentParser(
        prog="compromise", description="Reliability experiments for compromise decisions."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", parents=[common], help="run an experiment grid")
    run.add_argument("--config", type=Path, required=True, help="JSON or TOML experiment")
    run.add_argument("--seed", type=int, help="override the master seed")
    run.add_argument("--workers", type=int, help="threads solving replications")
    run.add_argument("--out", type=Path, help="output root directory")

    resume = commands.add_parser(
        "resume", parents=[common], help="recompute the report from stored replications"
    )
    resume.add_argument("--record", type=Path, required=True, help="run directory")
    resume.add_argument("--rho", type=float, help="override the prox weight")
    resume.add_argument("--out", type=Path, help="directory for the new report")

    report = commands.add_parser("report", parents=[common], help="re-emit a stored report")
    report.add_argument("--report", type=Path, required=True, help="report.json to read")
    report.add_argument("--out", type=Path, required=True, help="directory for the output")
    return parser


def _run(args: argparse.Namespace) -> int:
    config = load_config(args.config, seed=args.seed, workers=args.workers, out=args.out)
    outcome = run_experiment(config)
    rows = report_rows(outcome.report)
    csv_path, _ = write_report(outcome.directory, rows)
    emit_plot_data(rows, outcome.directory)
    _logger.info("report written to %s", csv_path)
    if outcome.failures:
        _logger.warning("%d macro-replications failed", outcome.failures)
        return _EXIT_CELL_FAILURE
    return 0


def _resume(args: argparse.Namespace) -> int:
    rows = report_rows(resume_aggregation(args.record, rho=args.rho))
    directory = args.out or args.record
    csv_path, _ = write_report(directory, rows)
    emit_plot_data(rows, directory)
    _logger.info("report recomputed into %s", csv_path)
    return 0


def _report(args: argparse.Namespace) -> int:
    rows = parse_report_json(args.report.read_text(encoding="utf-8"))
    write_report(args.out, rows)
    emit_plot_data(rows, args.out)
    _logger.info("%d report rows re-emitted into %s", len(rows), args.out)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, configure logging and dispatch a sub-command.

    Returns:
        Zero on success, one when some macro-replications failed and two on
        configuration or record errors.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    handlers = {"run": _run, "resume": _resume, "report": _report}
    try:
        return handlers[args.command](args)
    except (ModelError, RecordError, SolverError, OSError) as exc:
        _logger.error("%s failed: %s", args.command, exc)
        return _EXIT_ERROR
