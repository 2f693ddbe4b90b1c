"""Tests for the command-line entry point."""

import pytest

from compromise.reliability import REPORT_METRICS
from harness.formatters import parse_report_json
from harness.main import main
from tests.harness.helpers import SMALL_TOML


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "experiment.toml"
    path.write_text(SMALL_TOML, encoding="utf-8")
    return path


def run_directory(out):
    (directory,) = [p for p in out.iterdir() if p.is_dir()]
    return directory


class TestRun:
    def test_writes_report_and_plots(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["run", "--config", str(config_path), "--out", str(out)]) == 0
        directory = run_directory(out)
        rows = parse_report_json((directory / "report.json").read_text(encoding="utf-8"))
        assert len(rows) == 3 * len(REPORT_METRICS)
        assert (directory / "report.csv").exists()
        assert (directory / "plots" / "delta_mean.csv").exists()

    def test_failed_cells_exit_with_one(self, config_path, tmp_path):
        config_path.write_text(SMALL_TOML + 'flavor = "sd"\n', encoding="utf-8")
        assert main(["run", "--config", str(config_path), "--out", str(tmp_path / "out")]) == 1

    def test_missing_config_exits_with_two(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "absent.toml")]) == 2

    def test_invalid_config_exits_with_two(self, config_path):
        config_path.write_text(SMALL_TOML + "macro_reps_extra = 1\n", encoding="utf-8")
        assert main(["run", "--config", str(config_path)]) == 2

    def test_command_is_required(self):
        with pytest.raises(SystemExit):
            main([])


class TestResumeAndReport:
    def test_resume_then_report(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["run", "--config", str(config_path), "--out", str(out)]) == 0
        directory = run_directory(out)

        resumed = tmp_path / "resumed"
        argv = ["resume", "--record", str(directory), "--rho", "2", "--out", str(resumed)]
        assert main(argv) == 0
        assert (resumed / "report.csv").exists()

        emitted = tmp_path / "emitted"
        argv = ["report", "--report", str(resumed / "report.json"), "--out", str(emitted)]
        assert main(argv) == 0
        original = (resumed / "report.csv").read_text(encoding="utf-8")
        assert (emitted / "report.csv").read_text(encoding="utf-8") == original
        assert len(list((emitted / "plots").glob("*.csv"))) == 5

    def test_resume_of_a_missing_record_exits_with_two(self, tmp_path):
        assert main(["resume", "--record", str(tmp_path / "nothing")]) == 2
