"""Unit tests for chart rendering (SVG export is patched out)."""

from unittest.mock import patch

import pandas as pd
import plotly.graph_objects as go
import pytest

from src.lib.artifacts import StagedOutput, write_csv
from src.services.charts import (
    CHARTS,
    breadth_chart,
    calibration_chart,
    render_charts,
    sector_field_chart,
)


@pytest.fixture
def calibration_frame():
    return pd.DataFrame(
        {
            "bin_lo": [0.0, 0.5],
            "bin_hi": [0.5, 1.0],
            "count": [0, 12],
            "mean_predicted": [float("nan"), 0.7],
            "empirical_freq": [float("nan"), 0.75],
        }
    )


@pytest.mark.unit
class TestChartBuilders:
    """Test suite for individual chart builders."""

    def test_breadth_chart(self):
        """Empirical and model frequencies are grouped bars."""
        frame = pd.DataFrame(
            {
                "bin_lo": [-1.0, 0.0],
                "bin_hi": [0.0, 1.0],
                "empirical_count": [3, 7],
                "empirical_freq": [0.3, 0.7],
                "model_count": [40, 60],
                "model_freq": [0.4, 0.6],
            }
        )

        fig = breadth_chart(frame)

        assert isinstance(fig, go.Figure)
        assert len(fig.data) == 2
        assert fig.data[0].name == "empirical (T = 10)"
        assert fig.layout.barmode == "group"

    def test_calibration_skips_empty_bins(self, calibration_frame):
        """Only filled bins are plotted, next to the identity line."""
        fig = calibration_chart(calibration_frame)

        assert list(fig.data[0].x) == [0.7]
        assert fig.data[1].name == "identity"

    def test_sector_field_chart(self):
        """One line per sector column."""
        frame = pd.DataFrame(
            {"date": ["2020-01-02", "2020-01-03"], "Energy": [0.1, 0.2], "Financials": [0, 0]}
        )

        fig = sector_field_chart(frame)

        assert [trace.name for trace in fig.data] == ["Energy", "Financials"]


@pytest.mark.unit
class TestRenderCharts:
    """Test suite for render_charts."""

    def test_missing_and_empty_sources_are_skipped(self, tmp_path, calibration_frame):
        """Charts without data are reported with a note and no file."""
        report = tmp_path / "report"
        write_csv(report / "kinetic" / "calibration.csv", calibration_frame)
        write_csv(report / "kinetic" / "self_memory.csv", pd.DataFrame(columns=["ticker", "a"]))

        with patch("src.services.charts._save_figure") as save:
            with StagedOutput(tmp_path, "charts") as staged:
                outcomes = render_charts(report, staged)

        by_name = {o.name: o for o in outcomes}
        assert len(outcomes) == len(CHARTS)
        assert by_name["calibration"].path == "charts/calibration.svg"
        assert by_name["self_memory"].path is None
        assert by_name["self_memory"].note == "skipped: kinetic/self_memory.csv is empty"
        assert by_name["breadth"].note == "skipped: static/breadth_comparison.csv not found"
        save.assert_called_once()
        assert staged.written == ["charts/calibration.svg"]

    def test_sources_are_not_modified(self, tmp_path, calibration_frame):
        """Rendering only reads the report CSVs."""
        report = tmp_path / "report"
        source = report / "kinetic" / "calibration.csv"
        write_csv(source, calibration_frame)
        before = source.read_bytes()

        with patch("src.services.charts._save_figure"):
            with StagedOutput(tmp_path, "charts") as staged:
                render_charts(report, staged)

        assert source.read_bytes() == before
