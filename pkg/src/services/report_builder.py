"""Analysis pipeline: every report table plus the summary document.

``build_analysis`` computes and returns tables keyed by their relative output
path; the caller decides where they are written. Summary rows that cannot be
computed (no kinetic model, empty window, degenerate statistic) hold "n/a".
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import pandas as pd

from src.lib.config import FULL_SAMPLE_WINDOW, SCHEMA_VERSION
from src.lib.csv_models import SummaryDocument
from src.lib.errors import ValidationError
from src.lib.run_config import RunConfig
from src.models.interaction_graph import DistributionSummary
from src.models.kinetic_ising import KineticIsingModel
from src.models.sectors import SectorTable
from src.models.spin_panel import SpinPanel
from src.models.static_ising import StaticIsingModel
from src.services.analytics.coupling_analysis import (
    asymmetry_index,
    directed_coupling_summary,
    directed_strengths,
    histogram_frame,
    parameter_histograms,
    static_vs_kinetic_strength,
    symmetry_correlations,
)
from src.services.analytics.graph_metrics import (
    average_shortest_path,
    clustering_coefficient,
    connected_component_count,
    sector_assortativity,
    small_world_sigma,
    watts_strogatz_benchmark,
)
from src.services.analytics.network_filtering import (
    backbone,
    edge_frame,
    filter_top_fraction,
    node_frame,
    node_strength,
    prominence_frame,
    prominence_select,
    symmetrize,
)
from src.services.analytics.sector_analysis import (
    sector_matrices,
    sector_matrix_frame,
    sector_network_frames,
    sector_network_summary,
)
from src.services.gibbs_sampler import model_breadth_distribution
from src.services.kinetic_diagnostics import (
    calibration_table,
    decomposition_frame,
    field_decomposition,
    lag1_comparison_frame,
    market_fit_report,
    per_stock_prediction_frame,
    sector_field_frame,
    self_memory_frame,
    self_memory_summary,
)
from src.services.panel_statistics import breadth_histogram
from src.services.static_fitter import validate_static

logger = logging.getLogger(__name__)

NOT_AVAILABLE = "n/a"

STATIC_SECTION = "static_network"
KINETIC_SECTION = "kinetic_dynamics"

# Row labels of the static-network table, in display order.
STATIC_ROWS = (
    "Stocks (nodes)",
    "Trading days",
    "Candidate pairs",
    "Top-decile cutoff on |J_ij|",
    "Edges retained",
    "Average degree",
    "Connected components",
    "Positive edges",
    "Negative edges",
    "Average clustering coefficient",
    "Average shortest-path length (largest connected component)",
    "Largest component coverage",
    "Random-graph clustering (mean)",
    "Random-graph path length (mean)",
    "Small-world coefficient sigma",
    "Watts-Strogatz degree k",
    "Watts-Strogatz clustering (median)",
    "Watts-Strogatz path length (median)",
    "Sector assortativity",
    "Within-sector mean |J_ij|",
    "Between-sector mean |J_ij|",
    "Within/between ratio",
    "Backbone edges",
    "Prominent stocks",
    "Top within-sector mean |J_ij|",
    "Top sector mean |h_i|",
    "Top stocks by |h_i|",
    "Top stocks by strength",
    "Static fit converged",
    "Validation max-abs moment residual",
    "Validation max-abs correlation residual",
)

KINETIC_ROWS = (
    "Basis functions M",
    "Converged stocks",
    "Spearman rho_s between model-predicted and empirical market means",
    "Full-sample mean h(t)",
    "Full-sample std h(t)",
    "Spearman rho_s(h(t), empirical market mean)",
    "Spearman rho_s(theta(t), empirical market mean)",
    "Mean a_i",
    "Median a_i",
    "Fraction a_i > 0",
    "Fraction a_i < 0",
    "Top positive a_i",
    "Top negative a_i",
    "Mean J_ij",
    "Std J_ij",
    "Mean |J_ij|",
    "90th percentile |J_ij|",
    "Frobenius asymmetry index",
    "Symmetry Spearman rho_s(J_ij, J_ji)",
    "Symmetry Pearson r(J_ij, J_ji)",
    "Within-sector mean |J_ij|",
    "Between-sector mean |J_ij|",
    "Within/between ratio",
    "Spearman rho_s (static strength, kinetic total strength)",
    "Spearman rho_s (static strength, kinetic incoming strength)",
    "Spearman rho_s (static strength, kinetic outgoing strength)",
)

WINDOW_STATISTICS = (
    ("mean_external", "mean h(t)"),
    ("mean_total", "mean theta(t)"),
    ("mean_predicted", "model-predicted market mean"),
    ("mean_empirical", "empirical market mean"),
)


def window_row_labels(window: str) -> list[str]:
    return [f"{window}: {label}" for _, label in WINDOW_STATISTICS]


def summary_value(value: Any) -> Any:
    """JSON-ready value, with "n/a" for missing or non-finite numbers."""
    if value is None:
        return NOT_AVAILABLE
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else NOT_AVAILABLE
    return value


def _ranked(labels: list[str], values: np.ndarray, top_k: int) -> list[str]:
    order = sorted(
        (k for k in range(len(labels)) if np.isfinite(values[k])),
        key=lambda k: (-values[k], labels[k]),
    )
    return [f"{labels[k]} ({values[k]:.4g})" for k in order[:top_k]]


@dataclass
class AnalysisBundle:
    """Tables keyed by relative path, plus the summary document."""

    tables: dict[str, pd.DataFrame] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)


def _check_alignment(panel: SpinPanel, tickers: tuple[str, ...], what: str) -> None:
    if tuple(tickers) != panel.tickers:
        raise ValidationError(f"{what} tickers do not match the panel tickers")


def _benchmark_frame(random_c: np.ndarray, random_l: np.ndarray) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "realization": np.arange(random_c.size),
            "clustering": random_c,
            "path_length": random_l,
        }
    )


def _static_section(
    panel: SpinPanel, model: StaticIsingModel, cfg: RunConfig, bundle: AnalysisBundle
) -> dict[str, Any]:
    analysis = cfg.analysis
    gibbs = cfg.gibbs_config()
    rows: dict[str, Any] = {}
    rows["Stocks (nodes)"] = panel.N
    rows["Trading days"] = panel.T

    validation = validate_static(model, panel, gibbs, exact=analysis.validate_exact)
    bundle.tables["static/validation.csv"] = validation.rows
    rows["Validation max-abs moment residual"] = validation.max_abs_residual
    rows["Validation max-abs correlation residual"] = validation.max_abs_corr_residual

    h_hist, j_hist = parameter_histograms(model.h, model.J, analysis.parameter_bins)
    bundle.tables["static/h_histogram.csv"] = histogram_frame(h_hist)
    bundle.tables["static/j_histogram.csv"] = histogram_frame(j_hist)

    empirical = breadth_histogram(panel, analysis.breadth_bins)
    sampled = model_breadth_distribution(model, gibbs, analysis.breadth_bins)
    bundle.tables["static/breadth_comparison.csv"] = pd.DataFrame(
        {
            "bin_lo": empirical.edges[:-1],
            "bin_hi": empirical.edges[1:],
            "empirical_count": empirical.counts,
            "empirical_freq": empirical.counts / empirical.total,
            "model_count": sampled.counts,
            "model_freq": sampled.counts / sampled.total,
        }
    )

    graph = filter_top_fraction(
        model.J, panel.tickers, panel.sectors, h=model.h, fraction=analysis.filter_fraction
    )
    positive, negative = graph.sign_counts()
    path = average_shortest_path(graph)
    rows["Candidate pairs"] = graph.pair_count
    rows["Top-decile cutoff on |J_ij|"] = graph.cutoff
    rows["Edges retained"] = graph.n_edges
    rows["Average degree"] = graph.average_degree
    rows["Connected components"] = connected_component_count(graph)
    rows["Positive edges"] = positive
    rows["Negative edges"] = negative
    rows["Average clustering coefficient"] = clustering_coefficient(graph)
    rows["Average shortest-path length (largest connected component)"] = path.value
    rows["Largest component coverage"] = path.note
    bundle.tables["network/edges.csv"] = edge_frame(graph.graph)
    bundle.tables["network/nodes.csv"] = node_frame(graph.graph)

    if graph.n_edges > 0:
        bench = small_world_sigma(
            graph, analysis.random_graph_realizations, cfg.seed, cfg.workers
        )
        rows["Random-graph clustering (mean)"] = float(np.nanmean(bench.random_clustering))
        rows["Random-graph path length (mean)"] = float(np.nanmean(bench.random_path_length))
        rows["Small-world coefficient sigma"] = bench.sigma
        bundle.tables["network/random_benchmark.csv"] = _benchmark_frame(
            bench.random_clustering, bench.random_path_length
        )
        rows["Sector assortativity"] = sector_assortativity(graph)
    if graph.n_nodes >= 3 and graph.n_edges > 0:
        ws = watts_strogatz_benchmark(
            graph,
            analysis.watts_strogatz_beta,
            analysis.watts_strogatz_realizations,
            cfg.seed,
            cfg.workers,
        )
        rows["Watts-Strogatz degree k"] = ws.k
        rows["Watts-Strogatz clustering (median)"] = ws.clustering.median
        rows["Watts-Strogatz path length (median)"] = ws.path_length.median
        bundle.tables["network/watts_strogatz.csv"] = _benchmark_frame(
            ws.clustering.samples, ws.path_length.samples
        )
        bundle.tables["network/watts_strogatz_quartiles.csv"] = _quartile_frame(
            {"clustering": ws.clustering, "path_length": ws.path_length}
        )

    signed = sector_matrices(model.J, panel.sectors, mode="signed")
    absolute = sector_matrices(model.J, panel.sectors, mode="abs")
    bundle.tables["sectors/static_signed.csv"] = sector_matrix_frame(signed)
    bundle.tables["sectors/static_abs.csv"] = sector_matrix_frame(absolute)
    rows["Within-sector mean |J_ij|"] = absolute.within_mean
    rows["Between-sector mean |J_ij|"] = absolute.between_mean
    rows["Within/between ratio"] = absolute.ratio

    network = sector_network_summary(
        model.J, model.h, panel.sectors, analysis.sector_edge_percentile
    )
    nodes, edges = sector_network_frames(network)
    bundle.tables["sectors/network_nodes.csv"] = nodes
    bundle.tables["sectors/network_edges.csv"] = edges
    abbreviations = [SectorTable.abbreviation(s) for s in network.sectors]
    rows["Top within-sector mean |J_ij|"] = _ranked(
        abbreviations, np.array([network.within_abs_j[s] for s in network.sectors]), analysis.top_k
    )
    rows["Top sector mean |h_i|"] = _ranked(
        abbreviations, np.array([network.mean_abs_h[s] for s in network.sectors]), analysis.top_k
    )

    spine = backbone(graph, analysis.backbone_extra_fraction)
    rows["Backbone edges"] = spine.total_edges
    bundle.tables["network/backbone_edges.csv"] = edge_frame(spine.graph)

    prominence = prominence_select(
        model.h,
        model.J,
        panel.tickers,
        analysis.prominence_top_fraction,
        analysis.prominence_percentile,
    )
    rows["Prominent stocks"] = list(prominence.selected)
    bundle.tables["network/prominence.csv"] = prominence_frame(prominence)
    tickers = list(panel.tickers)
    rows["Top stocks by |h_i|"] = _ranked(tickers, np.abs(model.h), analysis.top_k)
    rows["Top stocks by strength"] = _ranked(tickers, node_strength(model.J), analysis.top_k)
    return rows


def _quartile_frame(summaries: dict[str, DistributionSummary]) -> pd.DataFrame:
    return pd.DataFrame(
        [(name, s.q1, s.median, s.q3, s.mean) for name, s in summaries.items()],
        columns=["statistic", "q1", "median", "q3", "mean"],
    )


def _kinetic_section(
    panel: SpinPanel,
    model: KineticIsingModel,
    static: StaticIsingModel,
    cfg: RunConfig,
    bundle: AnalysisBundle,
) -> dict[str, Any]:
    analysis = cfg.analysis
    rows: dict[str, Any] = {"Basis functions M": model.basis.n_basis}

    bundle.tables["kinetic/field_decomposition.csv"] = decomposition_frame(
        field_decomposition(model, panel)
    )
    report = market_fit_report(model, panel, cfg.windows)
    bundle.tables["kinetic/market_fit.csv"] = report.series_frame()
    bundle.tables["kinetic/windows.csv"] = report.windows
    rows["Spearman rho_s between model-predicted and empirical market means"] = report.spearman
    rows["Full-sample mean h(t)"] = report.external_mean
    rows["Full-sample std h(t)"] = report.external_std
    rows["Spearman rho_s(h(t), empirical market mean)"] = report.spearman_external
    rows["Spearman rho_s(theta(t), empirical market mean)"] = report.spearman_total
    for record in report.windows.to_dict("records"):
        if record["window"] == FULL_SAMPLE_WINDOW:
            continue
        for column, label in WINDOW_STATISTICS:
            rows[f"{record['window']}: {label}"] = record[column]

    bundle.tables["kinetic/calibration.csv"] = calibration_table(
        model, panel, analysis.calibration_bins
    )
    bundle.tables["kinetic/lag1_comparison.csv"] = lag1_comparison_frame(model, panel)
    bundle.tables["kinetic/per_stock_prediction.csv"] = per_stock_prediction_frame(model, panel)
    bundle.tables["kinetic/sector_fields.csv"] = sector_field_frame(model, panel)

    memory = self_memory_summary(model, analysis.top_k)
    bundle.tables["kinetic/self_memory.csv"] = self_memory_frame(model)
    rows["Mean a_i"] = memory.mean
    rows["Median a_i"] = memory.median
    rows["Fraction a_i > 0"] = memory.fraction_positive
    rows["Fraction a_i < 0"] = memory.fraction_negative
    rows["Top positive a_i"] = [f"{t} ({v:.4g})" for t, v in memory.top_positive]
    rows["Top negative a_i"] = [f"{t} ({v:.4g})" for t, v in memory.top_negative]

    couplings = directed_coupling_summary(model.J)
    rows["Mean J_ij"] = couplings["mean"]
    rows["Std J_ij"] = couplings["std"]
    rows["Mean |J_ij|"] = couplings["mean_abs"]
    rows["90th percentile |J_ij|"] = couplings["p90_abs"]
    rows["Frobenius asymmetry index"] = asymmetry_index(model.J)
    sym_spearman, sym_pearson = symmetry_correlations(model.J)
    rows["Symmetry Spearman rho_s(J_ij, J_ji)"] = sym_spearman
    rows["Symmetry Pearson r(J_ij, J_ji)"] = sym_pearson

    signed = sector_matrices(model.J, panel.sectors, mode="signed", directed=True)
    absolute = sector_matrices(model.J, panel.sectors, mode="abs", directed=True)
    bundle.tables["kinetic/sector_signed.csv"] = sector_matrix_frame(signed)
    bundle.tables["kinetic/sector_abs.csv"] = sector_matrix_frame(absolute)
    rows["Within-sector mean |J_ij|"] = absolute.within_mean
    rows["Between-sector mean |J_ij|"] = absolute.between_mean
    rows["Within/between ratio"] = absolute.ratio

    bundle.tables["kinetic/directed_strengths.csv"] = directed_strengths(model.J, panel.tickers)
    comparison = static_vs_kinetic_strength(static.J, model.J, panel.tickers)
    bundle.tables["kinetic/static_vs_kinetic.csv"] = comparison.table
    rows["Spearman rho_s (static strength, kinetic total strength)"] = comparison.spearman_total
    rows["Spearman rho_s (static strength, kinetic incoming strength)"] = comparison.spearman_in
    rows["Spearman rho_s (static strength, kinetic outgoing strength)"] = comparison.spearman_out

    if cfg.analysis.symmetrize:
        graph = filter_top_fraction(
            symmetrize(model.J),
            panel.tickers,
            panel.sectors,
            fraction=analysis.filter_fraction,
        )
        bundle.tables["kinetic/symmetrized_edges.csv"] = edge_frame(graph.graph)
    return rows


def _complete(rows: dict[str, Any], labels: list[str]) -> dict[str, Any]:
    """Every label present, in table order, with "n/a" for gaps."""
    return {label: summary_value(rows.get(label)) for label in labels}


def build_analysis(
    panel: SpinPanel,
    static: StaticIsingModel,
    kinetic: KineticIsingModel | None,
    cfg: RunConfig,
    static_fit_meta: dict[str, Any] | None = None,
    kinetic_fit_meta: dict[str, Any] | None = None,
) -> AnalysisBundle:
    """
    Run every diagnostic and collect the report tables and summary.

    Args:
        panel: Spin panel both models were fitted on
        static: Fitted static model
        kinetic: Fitted kinetic model, or None to report its rows as "n/a"
        cfg: Run configuration (analysis settings, windows, seed, workers)
        static_fit_meta: Static fit metadata, for the convergence row
        kinetic_fit_meta: Kinetic fit metadata, for the converged-stock count

    Raises:
        ValidationError: Model tickers differ from the panel
    """
    _check_alignment(panel, static.tickers, "Static model")
    bundle = AnalysisBundle()

    logger.info(f"Analyzing static model: N={static.n}")
    static_rows = _static_section(panel, static, cfg, bundle)

    kinetic_rows: dict[str, Any] = {}
    if kinetic is None:
        logger.warning("No kinetic model; kinetic diagnostics are reported as n/a")
    else:
        _check_alignment(panel, kinetic.tickers, "Kinetic model")
        logger.info(f"Analyzing kinetic model: N={kinetic.n}, M={kinetic.basis.n_basis}")
        kinetic_rows = _kinetic_section(panel, kinetic, static, cfg, bundle)
        if kinetic_fit_meta is not None:
            converged = kinetic_fit_meta.get("converged_stocks")
            total = kinetic_fit_meta.get("n_stocks")
            if converged is not None and total is not None:
                kinetic_rows["Converged stocks"] = f"{converged}/{total}"

    if static_fit_meta is not None and "converged" in static_fit_meta:
        static_rows["Static fit converged"] = bool(static_fit_meta["converged"])

    window_labels = [label for name in cfg.windows for label in window_row_labels(name)]
    document = SummaryDocument(
        schema_version=SCHEMA_VERSION,
        sections={
            STATIC_SECTION: _complete(static_rows, list(STATIC_ROWS)),
            KINETIC_SECTION: _complete(kinetic_rows, list(KINETIC_ROWS) + window_labels),
        },
    )
    bundle.summary = document.model_dump()
    return bundle
