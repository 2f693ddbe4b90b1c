"""Pytest fixtures for harness tests."""

from pathlib import Path

import pytest

from harness.runner import RunOutcome, run_experiment
from tests.harness.helpers import small_config


@pytest.fixture(scope="module")
def small_run(tmp_path_factory: pytest.TempPathFactory) -> RunOutcome:
    out: Path = tmp_path_factory.mktemp("runs")
    return run_experiment(small_config(out))
