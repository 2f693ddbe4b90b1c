"""Batch experiments: configuration, runs, records and reports."""

from harness.config import ExperimentConfig, config_hash, load_config
from harness.formatters import emit_plot_data, format_report_csv, format_report_json
from harness.records import CellRecord, RunRecord
from harness.runner import RunOutcome, resume_aggregation, run_experiment

__all__ = [
    "CellRecord",
    "ExperimentConfig",
    "RunOutcome",
    "RunRecord",
    "config_hash",
    "emit_plot_data",
    "format_report_csv",
    "format_report_json",
    "load_config",
    "resume_aggregation",
    "run_experiment",
]
