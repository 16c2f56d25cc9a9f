"""SVG charts rendered from the report CSVs.

Charts read only the CSV files under the output directory and never touch
them. A missing or empty source file skips its chart with a note.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path

import pandas as pd
import plotly.graph_objects as go

from src.lib.artifacts import StagedOutput
from src.lib.errors import ArtifactError
from src.lib.run_config import CHART_DIR

logger = logging.getLogger(__name__)

WIDTH = 900
HEIGHT = 500


@dataclass(frozen=True)
class ChartDefinition:
    name: str
    source: str
    build: Callable[[pd.DataFrame], go.Figure]


@dataclass(frozen=True)
class ChartOutcome:
    name: str
    path: str | None
    note: str = ""


def _layout(fig: go.Figure, title: str, x_title: str, y_title: str) -> go.Figure:
    fig.update_layout(
        title=title,
        xaxis_title=x_title,
        yaxis_title=y_title,
        width=WIDTH,
        height=HEIGHT,
        template="plotly_white",
    )
    return fig


def _identity(low: float, high: float) -> go.Scatter:
    return go.Scatter(
        x=[low, high], y=[low, high], mode="lines", name="identity", line={"dash": "dash"}
    )


def breadth_chart(frame: pd.DataFrame) -> go.Figure:
    days = int(frame["empirical_count"].sum())
    centers = 0.5 * (frame["bin_lo"] + frame["bin_hi"])
    fig = go.Figure(
        [
            go.Bar(x=centers, y=frame["empirical_freq"], name=f"empirical (T = {days})"),
            go.Bar(x=centers, y=frame["model_freq"], name="static model samples"),
        ]
    )
    fig.update_layout(barmode="group")
    return _layout(fig, "Market breadth distribution", "breadth", "frequency")


def calibration_chart(frame: pd.DataFrame) -> go.Figure:
    filled = frame[frame["count"] > 0]
    fig = go.Figure(
        [
            go.Scatter(
                x=filled["mean_predicted"],
                y=filled["empirical_freq"],
                mode="markers",
                name="bins",
                text=filled["count"],
            ),
            _identity(0.0, 1.0),
        ]
    )
    return _layout(fig, "Calibration", "predicted P(up)", "observed up frequency")


def decomposition_chart(frame: pd.DataFrame) -> go.Figure:
    fig = go.Figure(
        [
            go.Scatter(x=frame["date"], y=frame[column], mode="lines", name=column)
            for column in ("external", "self", "interaction", "total")
        ]
    )
    return _layout(fig, "Market-average local field", "date", "field")


def market_fit_chart(frame: pd.DataFrame) -> go.Figure:
    fig = go.Figure(
        [
            go.Scatter(x=frame["date"], y=frame["empirical"], mode="lines", name="empirical"),
            go.Scatter(x=frame["date"], y=frame["predicted"], mode="lines", name="predicted"),
        ]
    )
    return _layout(fig, "Next-day market mean", "date", "market mean")


def validation_chart(frame: pd.DataFrame) -> go.Figure:
    fig = go.Figure(
        [
            go.Scatter(
                x=frame.loc[frame["kind"] == kind, "empirical"],
                y=frame.loc[frame["kind"] == kind, "model"],
                mode="markers",
                name=kind,
            )
            for kind in ("mean", "pair")
        ]
        + [_identity(-1.0, 1.0)]
    )
    return _layout(fig, "Static model moments", "empirical", "model")


def _histogram_chart(title: str, x_title: str) -> Callable[[pd.DataFrame], go.Figure]:
    def build(frame: pd.DataFrame) -> go.Figure:
        centers = 0.5 * (frame["bin_lo"] + frame["bin_hi"])
        total = int(frame["count"].sum())
        fig = go.Figure([go.Bar(x=centers, y=frame["count"], name=f"n = {total}")])
        return _layout(fig, title, x_title, "count")

    return build


def lag1_chart(frame: pd.DataFrame) -> go.Figure:
    fig = go.Figure(
        [
            go.Scatter(x=frame["empirical"], y=frame["model"], mode="markers", name="pairs"),
            _identity(float(frame["empirical"].min()), float(frame["empirical"].max())),
        ]
    )
    return _layout(fig, "Lag-1 cross correlations", "empirical", "model-implied")


def strength_chart(frame: pd.DataFrame) -> go.Figure:
    fig = go.Figure(
        [
            go.Scatter(
                x=frame["static_strength"],
                y=frame["kinetic_total"],
                mode="markers",
                text=frame["ticker"],
                name="stocks",
            )
        ]
    )
    return _layout(fig, "Static vs kinetic node strength", "static strength", "kinetic total")


def prominence_chart(frame: pd.DataFrame) -> go.Figure:
    fig = go.Figure(
        [
            go.Scatter(
                x=frame.loc[frame["selected"] == flag, "x"],
                y=frame.loc[frame["selected"] == flag, "y"],
                mode="markers",
                text=frame.loc[frame["selected"] == flag, "ticker"],
                name="selected" if flag else "other",
            )
            for flag in (False, True)
        ]
    )
    return _layout(fig, "Prominent stocks", "|h| (scaled)", "strength (scaled)")


def _sector_heatmap(title: str) -> Callable[[pd.DataFrame], go.Figure]:
    def build(frame: pd.DataFrame) -> go.Figure:
        sectors = list(frame["sector"])
        fig = go.Figure(
            go.Heatmap(z=frame[sectors].to_numpy(), x=sectors, y=sectors, colorscale="RdBu")
        )
        return _layout(fig, title, "source sector", "target sector")

    return build


def sector_field_chart(frame: pd.DataFrame) -> go.Figure:
    fig = go.Figure(
        [
            go.Scatter(x=frame["date"], y=frame[column], mode="lines", name=column)
            for column in frame.columns
            if column != "date"
        ]
    )
    return _layout(fig, "External field by sector", "date", "mean h(t)")


def self_memory_chart(frame: pd.DataFrame) -> go.Figure:
    fig = go.Figure([go.Bar(x=frame["ticker"], y=frame["a"], name="a_i")])
    return _layout(fig, "Self-memory coefficients", "stock", "a_i")


CHARTS = (
    ChartDefinition("breadth", "static/breadth_comparison.csv", breadth_chart),
    ChartDefinition("validation", "static/validation.csv", validation_chart),
    ChartDefinition("h_histogram", "static/h_histogram.csv", _histogram_chart("Fields h_i", "h")),
    ChartDefinition(
        "j_histogram", "static/j_histogram.csv", _histogram_chart("Couplings J_ij", "J")
    ),
    ChartDefinition("prominence", "network/prominence.csv", prominence_chart),
    ChartDefinition("sector_abs", "sectors/static_abs.csv", _sector_heatmap("Mean |J| by sector")),
    ChartDefinition(
        "sector_signed", "sectors/static_signed.csv", _sector_heatmap("Mean J by sector")
    ),
    ChartDefinition("field_decomposition", "kinetic/field_decomposition.csv", decomposition_chart),
    ChartDefinition("market_fit", "kinetic/market_fit.csv", market_fit_chart),
    ChartDefinition("calibration", "kinetic/calibration.csv", calibration_chart),
    ChartDefinition("lag1", "kinetic/lag1_comparison.csv", lag1_chart),
    ChartDefinition("strength", "kinetic/static_vs_kinetic.csv", strength_chart),
    ChartDefinition("sector_fields", "kinetic/sector_fields.csv", sector_field_chart),
    ChartDefinition("self_memory", "kinetic/self_memory.csv", self_memory_chart),
    ChartDefinition(
        "kinetic_sector_signed",
        "kinetic/sector_signed.csv",
        _sector_heatmap("Mean directed J by sector"),
    ),
)


def _save_figure(fig: go.Figure, path: Path) -> None:
    """Export one figure as SVG through kaleido."""
    try:
        fig.write_image(str(path), format="svg")
    except (OSError, ValueError) as e:
        raise ArtifactError(f"Failed to render {path}: {e}") from e


def render_charts(report_dir: Path, output: StagedOutput) -> list[ChartOutcome]:
    """
    Render every chart whose source CSV exists and has rows.

    Args:
        report_dir: Directory holding the report CSVs
        output: Staged output receiving ``charts/<name>.svg``

    Returns:
        One outcome per chart; ``path`` is relative to the output directory
        and None for skipped charts
    """
    outcomes = []
    for chart in CHARTS:
        source = report_dir / chart.source
        if not source.exists():
            outcomes.append(ChartOutcome(chart.name, None, f"skipped: {chart.source} not found"))
            continue
        try:
            frame = pd.read_csv(source)
        except pd.errors.EmptyDataError:
            frame = pd.DataFrame()
        if frame.empty:
            outcomes.append(ChartOutcome(chart.name, None, f"skipped: {chart.source} is empty"))
            continue

        relative = f"{CHART_DIR}/{chart.name}.svg"
        _save_figure(chart.build(frame), output.path(relative))
        outcomes.append(ChartOutcome(chart.name, relative))
        logger.debug(f"Rendered {chart.name} from {chart.source}")
    rendered = sum(1 for o in outcomes if o.path is not None)
    logger.info(f"Rendered {rendered} of {len(CHARTS)} charts")
    return outcomes
