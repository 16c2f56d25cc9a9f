"""Network analytics for fitted coupling matrices."""

from src.services.analytics.coupling_analysis import (
    StrengthComparison,
    asymmetry_index,
    directed_coupling_summary,
    directed_strengths,
    parameter_histograms,
    static_vs_kinetic_strength,
    symmetry_correlations,
)
from src.services.analytics.graph_metrics import (
    PathLength,
    average_shortest_path,
    clustering_coefficient,
    sector_assortativity,
    small_world_sigma,
    watts_strogatz_benchmark,
)
from src.services.analytics.network_filtering import (
    backbone,
    filter_top_fraction,
    node_strength,
    prominence_select,
    symmetrize,
)
from src.services.analytics.sector_analysis import sector_matrices, sector_network_summary

__all__ = [
    "PathLength",
    "StrengthComparison",
    "asymmetry_index",
    "average_shortest_path",
    "backbone",
    "clustering_coefficient",
    "directed_coupling_summary",
    "directed_strengths",
    "filter_top_fraction",
    "node_strength",
    "parameter_histograms",
    "prominence_select",
    "sector_assortativity",
    "sector_matrices",
    "sector_network_summary",
    "small_world_sigma",
    "static_vs_kinetic_strength",
    "symmetrize",
    "symmetry_correlations",
    "watts_strogatz_benchmark",
]
