"""CSV and JSON renderings of reliability reports."""

import csv
import io
import json
import math
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from compromise.errors import RecordError
from compromise.reliability import REPORT_METRICS, ReportRow
from harness.records import write_atomic

__all__ = [
    "CSV_COLUMNS",
    "PLOT_COLUMNS",
    "PLOT_METRICS",
    "emit_plot_data",
    "format_report_csv",
    "format_report_json",
    "parse_report_json",
    "write_report",
]

CSV_COLUMNS = ("flavor", "n", "m", "R", "metric", "value", "stderr", "bound", "slope")
PLOT_COLUMNS = ("flavor", "m", "n", "value", "slope")
PLOT_METRICS = REPORT_METRICS[:5]

_REPORT_CSV = "report.csv"
_REPORT_JSON = "report.json"
_PLOT_DIRECTORY = "plots"


def _number(value: float) -> str:
    """Shortest round-tripping text of a float, empty for NaN."""
    return "" if math.isnan(value) else repr(float(value))


def _json_number(value: float) -> float | None:
    return None if math.isnan(value) else float(value)


def _csv(header: Sequence[str], lines: Sequence[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(lines)
    return buffer.getvalue()


def format_report_csv(rows: Sequence[ReportRow]) -> str:
    """One line per ``(flavor, n, m, metric)`` with the columns of ``CSV_COLUMNS``."""
    return _csv(
        CSV_COLUMNS,
        [
            (
                row.flavor,
                row.n,
                row.m,
                row.macro_reps,
                row.metric,
                _number(row.value),
                _number(row.stderr),
                _number(row.bound),
                _number(row.slope),
            )
            for row in rows
        ],
    )


def format_report_json(rows: Sequence[ReportRow]) -> str:
    """JSON mirror of the CSV; NaN becomes ``null``."""
    return json.dumps(
        [
            {
                "flavor": row.flavor,
                "n": row.n,
                "m": row.m,
                "R": row.macro_reps,
                "metric": row.metric,
                "value": _json_number(row.value),
                "stderr": _json_number(row.stderr),
                "bound": _json_number(row.bound),
                "slope": _json_number(row.slope),
            }
            for row in rows
        ],
        indent=2,
    )


def parse_report_json(text: str) -> list[ReportRow]:
    """Read rows written by ``format_report_json``.

    Raises:
        RecordError: If the document is not a list of complete rows.
    """

    def number(value: Any) -> float:
        return math.nan if value is None else float(value)

    try:
        return [
            ReportRow(
                flavor=str(item["flavor"]),
                n=int(item["n"]),
                m=int(item["m"]),
                macro_reps=int(item["R"]),
                metric=str(item["metric"]),
                value=number(item["value"]),
                stderr=number(item["stderr"]),
                bound=number(item["bound"]),
                slope=number(item["slope"]),
            )
            for item in json.loads(text)
        ]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise RecordError(f"record incomplete: {exc}") from exc


def write_report(directory: Path, rows: Sequence[ReportRow]) -> tuple[Path, Path]:
    """Write ``report.csv`` and ``report.json`` into ``directory``."""
    csv_path = directory / _REPORT_CSV
    json_path = directory / _REPORT_JSON
    write_atomic(csv_path, format_report_csv(rows))
    write_atomic(json_path, format_report_json(rows))
    return csv_path, json_path


def emit_plot_data(rows: Sequence[ReportRow], directory: Path) -> list[Path]:
    """Write one ``(n -> statistic)`` series file per fitted metric.

    Files are written even for an empty report, holding only the header.
    """
    paths = []
    for metric in PLOT_METRICS:
        series = sorted(
            (row for row in rows if row.metric == metric),
            key=lambda row: (row.flavor, row.m, row.n),
        )
        path = directory / _PLOT_DIRECTORY / f"{metric}.csv"
        write_atomic(
            path,
            _csv(
                PLOT_COLUMNS,
                [(r.flavor, r.m, r.n, _number(r.value), _number(r.slope)) for r in series],
            ),
        )
        paths.append(path)
    return paths
