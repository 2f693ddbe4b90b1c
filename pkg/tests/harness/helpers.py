"""Small experiment configurations for harness tests."""

from pathlib import Path
from typing import Any

from compromise.reliability import ReportRow
from harness.config import ExperimentConfig


def small_config(out: Path, **changes: Any) -> ExperimentConfig:
    """Three sample sizes of the quadratic desk problem on a coarse grid."""
    fields: dict[str, Any] = {
        "problem": "quad2",
        "n_values": [4, 8, 16],
        "m_values": [2],
        "macro_reps": 2,
        "grid_step": 0.1,
        "seed": 7,
        "out": out,
    }
    fields.update(changes)
    return ExperimentConfig(**fields)


def report_row(metric: str = "delta_mean", **changes: Any) -> ReportRow:
    fields: dict[str, Any] = {
        "flavor": "saa",
        "n": 4,
        "m": 2,
        "macro_reps": 3,
        "metric": metric,
        "value": 0.5,
        "stderr": float("nan"),
        "bound": 1.25,
        "slope": float("nan"),
    }
    fields.update(changes)
    return ReportRow(**fields)


SMALL_TOML = """\
problem = "quad2"
n_values = [4, 8, 16]
m_values = [2]
macro_reps = 2
grid_step = 0.1
seed = 7
"""
