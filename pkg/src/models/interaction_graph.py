"""Result types for the coupling-network analyses."""

from dataclasses import dataclass, field

import networkx as nx
import numpy as np


@dataclass(frozen=True)
class InteractionGraph:
    """Signed weighted undirected graph over stocks.

    Nodes are tickers carrying ``sector``, ``h`` and ``strength`` attributes;
    edges carry ``weight`` (signed J_ij) and ``abs_weight``.
    """

    graph: nx.Graph
    cutoff: float = float("nan")
    pair_count: int = 0

    @property
    def n_nodes(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def n_edges(self) -> int:
        return self.graph.number_of_edges()

    @property
    def average_degree(self) -> float:
        return 2.0 * self.n_edges / self.n_nodes if self.n_nodes else 0.0

    def sign_counts(self) -> tuple[int, int]:
        """Number of positive and negative edges."""
        weights = [w for _, _, w in self.graph.edges(data="weight")]
        return sum(1 for w in weights if w > 0), sum(1 for w in weights if w < 0)


@dataclass(frozen=True)
class BackboneGraph:
    """Maximum spanning forest on |J| plus the strongest remaining edges."""

    graph: nx.Graph
    tree_edges: tuple[tuple[str, str], ...]
    extra_edges: tuple[tuple[str, str], ...]
    input_edges: int

    @property
    def total_edges(self) -> int:
        return len(self.tree_edges) + len(self.extra_edges)


@dataclass(frozen=True)
class ProminenceResult:
    """Stocks ranked by normalized distance in the (|h|, strength) plane."""

    tickers: tuple[str, ...]
    abs_h: np.ndarray
    strength: np.ndarray
    radial: np.ndarray
    selected: tuple[str, ...]
    boundary_radius: float
    h_scale: float
    strength_scale: float
    degenerate: bool = False


@dataclass(frozen=True)
class BenchmarkResult:
    """Observed clustering/path length against edge-matched random graphs."""

    clustering: float
    path_length: float
    random_clustering: np.ndarray
    random_path_length: np.ndarray
    sigma: float
    n_nodes: int
    n_edges: int


@dataclass(frozen=True)
class DistributionSummary:
    """Quartiles of a sampled statistic, with the raw samples kept."""

    samples: np.ndarray
    q1: float
    median: float
    q3: float
    mean: float

    @classmethod
    def of(cls, samples: np.ndarray) -> "DistributionSummary":
        values = np.asarray(samples, dtype=np.float64)
        q1, median, q3 = np.percentile(values, [25, 50, 75])
        return cls(values, float(q1), float(median), float(q3), float(values.mean()))


@dataclass(frozen=True)
class WattsStrogatzResult:
    n_nodes: int
    k: int
    beta: float
    clustering: DistributionSummary
    path_length: DistributionSummary

    @property
    def n_realizations(self) -> int:
        return int(self.clustering.samples.size)


@dataclass(frozen=True)
class SectorMatrix:
    """K x K mean coupling over sector pairs (rows = target sector)."""

    sectors: tuple[str, ...]
    values: np.ndarray
    counts: np.ndarray
    mode: str
    directed: bool
    within_mean: float
    between_mean: float

    @property
    def ratio(self) -> float:
        if self.between_mean == 0:
            return float("nan")
        return self.within_mean / self.between_mean

    def within_by_sector(self) -> dict[str, float]:
        """Diagonal entries keyed by sector (NaN where no pair exists)."""
        return {s: float(self.values[k, k]) for k, s in enumerate(self.sectors)}


@dataclass(frozen=True)
class SectorNetwork:
    """Sector-level graph: node means and thresholded cross-sector links."""

    sectors: tuple[str, ...]
    mean_abs_h: dict[str, float]
    within_abs_j: dict[str, float]
    edges: dict[tuple[str, str], float] = field(default_factory=dict)
    threshold: float = float("nan")
