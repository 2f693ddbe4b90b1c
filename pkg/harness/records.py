"""Persisted run and cell records.

A run directory holds ``run.json`` and one ``cells/<n>_<m>_<rep>.json`` per
macro-replication. Cell files are written atomically so that a crash never
leaves a partial record behind.
"""

import logging
import os
from pathlib import Path

from pydantic import BaseModel, ConfigDict, ValidationError

from compromise.errors import RecordError
from harness.config import ExperimentConfig, config_hash

__all__ = [
    "CellRecord",
    "CompromiseRecord",
    "ReplicationRecord",
    "RunRecord",
    "cell_path",
    "qp_dump_path",
    "read_cell",
    "read_run",
    "write_atomic",
    "write_cell",
    "write_run",
]

_logger = logging.getLogger(__name__)

_RUN_FILE = "run.json"
_CELL_DIRECTORY = "cells"


class _Record(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ReplicationRecord(_Record):
    """Output of one replication, enough to redo the aggregation.

    ``point`` is the replication solution (the incumbent for SD). Cutting-plane
    and SD runs also carry their terminal model.
    """

    index: int
    sample_id: str
    point: list[float]
    value: float
    objective: float
    epsilon: float
    iterations: int
    intercepts: list[float] | None = None
    slopes: list[list[float]] | None = None
    model_iteration: int | None = None


class CompromiseRecord(_Record):
    point: list[float]
    anchor: list[float]
    value: float
    flavor: str
    rho: float
    epsilon: float
    kkt_residual: float


class CellRecord(_Record):
    """One macro-replication of one ``(n, m)`` cell."""

    n: int
    m: int
    rep: int
    flavor: str
    stream_key: list[int]
    replications: list[ReplicationRecord]
    compromise: CompromiseRecord | None = None
    seconds: float = 0.0
    error: str | None = None


class RunRecord(_Record):
    """Configuration and bookkeeping of a run directory."""

    config: ExperimentConfig
    config_hash: str
    seed: int
    cells: list[str]
    seconds: float = 0.0


def write_atomic(path: Path, text: str) -> None:
    """Write ``text`` through a temporary file and ``os.replace``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    temporary = path.with_suffix(path.suffix + ".tmp")
    with temporary.open("w", encoding="utf-8") as handle:
        handle.write(text)
        handle.flush()
        os.fsync(handle.fileno())
    os.replace(temporary, path)


def cell_path(directory: Path, n: int, m: int, rep: int) -> Path:
    return directory / _CELL_DIRECTORY / f"{n}_{m}_{rep}.json"


def qp_dump_path(directory: Path, n: int, m: int, rep: int) -> Path:
    """Text dump of the QP that made a cell fail."""
    return directory / _CELL_DIRECTORY / f"{n}_{m}_{rep}.qp.txt"


def write_cell(directory: Path, record: CellRecord) -> Path:
    path = cell_path(directory, record.n, record.m, record.rep)
    write_atomic(path, record.model_dump_json(indent=2))
    return path


def read_cell(directory: Path, n: int, m: int, rep: int) -> CellRecord:
    """Load one cell record.

    Raises:
        RecordError: If the file is missing or does not parse ("record incomplete").
    """
    path = cell_path(directory, n, m, rep)
    try:
        return CellRecord.model_validate_json(path.read_text(encoding="utf-8"))
    except (OSError, ValidationError) as exc:
        raise RecordError(f"record incomplete: {path.name}") from exc


def write_run(directory: Path, record: RunRecord) -> None:
    write_atomic(directory / _RUN_FILE, record.model_dump_json(indent=2))


def read_run(directory: Path) -> RunRecord:
    """Load ``run.json`` and check its configuration hash.

    Raises:
        RecordError: If the file is missing, invalid, or its hash does not
            match the stored configuration.
    """
    path = directory / _RUN_FILE
    try:
        record = RunRecord.model_validate_json(path.read_text(encoding="utf-8"))
    except (OSError, ValidationError) as exc:
        raise RecordError(f"record incomplete: {path}") from exc
    if config_hash(record.config) != record.config_hash:
        raise RecordError("config hash mismatch")
    _logger.debug("run record %s with %d cells", record.config_hash, len(record.cells))
    return record
