"""Tests for report renderings."""

import json
import math

import pytest

from compromise.errors import RecordError
from harness.formatters import (
    CSV_COLUMNS,
    PLOT_METRICS,
    emit_plot_data,
    format_report_csv,
    format_report_json,
    parse_report_json,
    write_report,
)
from tests.harness.helpers import report_row


class TestCsv:
    def test_header_and_missing_values(self):
        lines = format_report_csv([report_row()]).splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert lines[1] == "saa,4,2,3,delta_mean,0.5,,1.25,"

    def test_empty_report_keeps_the_header(self):
        assert format_report_csv([]) == ",".join(CSV_COLUMNS) + "\n"


class TestJson:
    def test_nan_becomes_null(self):
        document = json.loads(format_report_json([report_row()]))
        assert document[0]["stderr"] is None
        assert document[0]["bound"] == 1.25
        assert document[0]["R"] == 3

    def test_parse_restores_nan(self):
        rows = parse_report_json(format_report_json([report_row(), report_row("delta_variance")]))
        assert [row.metric for row in rows] == ["delta_mean", "delta_variance"]
        assert math.isnan(rows[0].stderr)
        assert rows[0].bound == 1.25

    @pytest.mark.parametrize("text", ["not json", "[{}]", '[{"flavor": "saa"}]', "3"])
    def test_parse_rejects_incomplete_documents(self, text):
        with pytest.raises(RecordError, match="record incomplete"):
            parse_report_json(text)


class TestFiles:
    def test_write_report(self, tmp_path):
        csv_path, json_path = write_report(tmp_path, [report_row()])
        assert csv_path.name == "report.csv"
        assert json_path.name == "report.json"
        assert len(parse_report_json(json_path.read_text(encoding="utf-8"))) == 1

    def test_plot_series_per_metric(self, tmp_path):
        rows = [report_row(n=16), report_row(n=4), report_row("mean_variance")]
        paths = emit_plot_data(rows, tmp_path)
        assert [p.stem for p in paths] == list(PLOT_METRICS)
        lines = (tmp_path / "plots" / "delta_mean.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "flavor,m,n,value,slope"
        assert [line.split(",")[2] for line in lines[1:]] == ["4", "16"]

    def test_empty_report_still_writes_headers(self, tmp_path):
        for path in emit_plot_data([], tmp_path):
            assert path.read_text(encoding="utf-8") == "flavor,m,n,value,slope\n"
