"""Unit tests for artifact writing and staging."""

import json
import math

import numpy as np
import pandas as pd
import pytest

from src.lib.artifacts import StagedOutput, dump_json, read_json, write_csv
from src.lib.errors import ArtifactError


@pytest.mark.unit
class TestJson:
    """Test suite for JSON artifacts."""

    def test_stable_layout(self):
        """Keys are sorted and the text ends with a newline."""
        text = dump_json({"b": 1, "a": {"d": 2, "c": 3}})

        assert text.index('"a"') < text.index('"b"')
        assert text.index('"c"') < text.index('"d"')
        assert text.endswith("}\n")

    def test_numpy_and_non_finite_values(self):
        """numpy scalars become Python values and NaN becomes null."""
        payload = {"x": np.float64(0.5), "n": np.int64(3), "bad": math.nan, "v": np.arange(2)}

        assert json.loads(dump_json(payload)) == {"x": 0.5, "n": 3, "bad": None, "v": [0, 1]}

    def test_read_missing(self, tmp_path):
        """Missing files raise ArtifactError."""
        with pytest.raises(ArtifactError, match="not found"):
            read_json(tmp_path / "absent.json")

    def test_read_non_object(self, tmp_path):
        """Only JSON objects are accepted."""
        path = tmp_path / "list.json"
        path.write_text("[1, 2]", encoding="utf-8")

        with pytest.raises(ArtifactError, match="JSON object"):
            read_json(path)


@pytest.mark.unit
class TestCsv:
    """Test suite for CSV artifacts."""

    def test_float_format_and_line_endings(self, tmp_path):
        """Floats use the fixed format and lines end with a bare newline."""
        path = tmp_path / "table.csv"

        write_csv(path, pd.DataFrame({"x": [1 / 3, 2.0]}))

        assert path.read_bytes() == b"x\n0.3333333333\n2\n"


@pytest.mark.unit
class TestStagedOutput:
    """Test suite for StagedOutput."""

    def test_publishes_on_success(self, tmp_path):
        """Files appear in the output directory and the staging area is removed."""
        with StagedOutput(tmp_path, "ingest") as staged:
            staged.write_json("report.json", {"ok": True})
            staged.write_csv("tables/t.csv", pd.DataFrame({"a": [1]}))
            staged.write_text("notes.txt", "hello\n")
            assert not (tmp_path / "report.json").exists()

        assert read_json(tmp_path / "report.json") == {"ok": True}
        assert (tmp_path / "tables" / "t.csv").exists()
        assert (tmp_path / "notes.txt").read_text(encoding="utf-8") == "hello\n"
        assert staged.written == ["report.json", "tables/t.csv", "notes.txt"]
        assert not (tmp_path / ".staging-ingest").exists()

    def test_discards_on_error(self, tmp_path):
        """A failing command leaves earlier artifacts untouched and adds nothing."""
        (tmp_path / "report.json").write_text('{"old": true}\n', encoding="utf-8")

        with pytest.raises(RuntimeError):
            with StagedOutput(tmp_path, "analyze") as staged:
                staged.write_json("report.json", {"new": True})
                staged.write_json("extra.json", {})
                raise RuntimeError("boom")

        assert read_json(tmp_path / "report.json") == {"old": True}
        assert not (tmp_path / "extra.json").exists()
        assert not (tmp_path / ".staging-analyze").exists()

    def test_stale_staging_is_cleared(self, tmp_path):
        """Leftovers of an interrupted run are not published."""
        stale = tmp_path / ".staging-charts"
        stale.mkdir()
        (stale / "old.svg").write_text("x", encoding="utf-8")

        with StagedOutput(tmp_path, "charts") as staged:
            staged.write_text("new.svg", "<svg/>")

        assert (tmp_path / "new.svg").exists()
        assert not (tmp_path / "old.svg").exists()
