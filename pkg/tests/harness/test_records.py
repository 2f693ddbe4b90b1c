"""Tests for persisted run and cell records."""

import pytest

from compromise.errors import RecordError
from harness.config import config_hash
from harness.records import (
    CellRecord,
    ReplicationRecord,
    RunRecord,
    cell_path,
    read_cell,
    read_run,
    write_atomic,
    write_cell,
    write_run,
)
from tests.harness.helpers import small_config


def make_cell(rep: int = 0) -> CellRecord:
    replication = ReplicationRecord(
        index=0,
        sample_id="7:4.2.0.0",
        point=[0.25, 0.75],
        value=0.1,
        objective=0.1,
        epsilon=0.0,
        iterations=1,
    )
    return CellRecord(
        n=4, m=2, rep=rep, flavor="saa", stream_key=[4, 2, rep], replications=[replication]
    )


class TestWriteAtomic:
    def test_creates_parents_and_leaves_no_temporary(self, tmp_path):
        path = tmp_path / "a" / "b" / "file.json"
        write_atomic(path, "{}")
        assert path.read_text(encoding="utf-8") == "{}"
        assert list(path.parent.iterdir()) == [path]

    def test_replaces_existing_content(self, tmp_path):
        path = tmp_path / "file.json"
        write_atomic(path, "old")
        write_atomic(path, "new")
        assert path.read_text(encoding="utf-8") == "new"


class TestCellRecords:
    def test_path_layout(self, tmp_path):
        assert cell_path(tmp_path, 4, 2, 1) == tmp_path / "cells" / "4_2_1.json"

    def test_written_cell_reads_back(self, tmp_path):
        write_cell(tmp_path, make_cell(1))
        record = read_cell(tmp_path, 4, 2, 1)
        assert record.replications[0].point == [0.25, 0.75]
        assert record.error is None

    def test_missing_cell(self, tmp_path):
        with pytest.raises(RecordError, match="record incomplete"):
            read_cell(tmp_path, 4, 2, 0)

    def test_truncated_cell(self, tmp_path):
        path = write_cell(tmp_path, make_cell())
        path.write_text(path.read_text(encoding="utf-8")[:40], encoding="utf-8")
        with pytest.raises(RecordError, match="record incomplete"):
            read_cell(tmp_path, 4, 2, 0)


class TestRunRecords:
    def test_hash_is_checked(self, tmp_path):
        config = small_config(tmp_path)
        record = RunRecord(config=config, config_hash=config_hash(config), seed=7, cells=[])
        write_run(tmp_path, record)
        assert read_run(tmp_path).config_hash == config_hash(config)

        write_run(tmp_path, record.model_copy(update={"config_hash": "0" * 16}))
        with pytest.raises(RecordError, match="config hash mismatch"):
            read_run(tmp_path)

    def test_missing_run(self, tmp_path):
        with pytest.raises(RecordError, match="record incomplete"):
            read_run(tmp_path)
