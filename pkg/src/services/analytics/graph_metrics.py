"""Structural metrics of interaction graphs and their random benchmarks.

Metrics are unweighted: clustering is the average local clustering over all
nodes, path length the mean BFS distance inside the largest connected
component.
"""

import logging
import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import networkx as nx
import numpy as np

from src.lib.config import (
    DEFAULT_WORKERS,
    RANDOM_GRAPH_REALIZATIONS,
    UNKNOWN_SECTOR,
    WATTS_STROGATZ_BETA,
    WATTS_STROGATZ_REALIZATIONS,
)
from src.lib.errors import ValidationError
from src.lib.random_streams import integer_seed
from src.lib.validators import validate_fraction, validate_workers
from src.models.interaction_graph import (
    BenchmarkResult,
    DistributionSummary,
    InteractionGraph,
    WattsStrogatzResult,
)

logger = logging.getLogger(__name__)

GraphLike = InteractionGraph | nx.Graph


def _nx(g: GraphLike) -> nx.Graph:
    return g.graph if isinstance(g, InteractionGraph) else g


@dataclass(frozen=True)
class PathLength:
    """Average shortest path on the largest component, with its coverage."""

    value: float
    component_nodes: int
    total_nodes: int

    @property
    def coverage(self) -> float:
        return self.component_nodes / self.total_nodes if self.total_nodes else 0.0

    @property
    def note(self) -> str:
        if self.component_nodes == self.total_nodes:
            return "connected"
        return f"largest component covers {self.component_nodes} of {self.total_nodes} nodes"


def clustering_coefficient(g: GraphLike) -> float:
    """
    Average local clustering; nodes of degree < 2 contribute 0.

    Examples:
        triangle -> 1.0, star -> 0.0
    """
    graph = _nx(g)
    if graph.number_of_nodes() == 0:
        return float("nan")
    return float(nx.average_clustering(graph))


def largest_component(graph: nx.Graph) -> set:
    """Largest connected component; ties go to the one with the smallest node label."""
    components = sorted(nx.connected_components(graph), key=lambda c: (-len(c), min(map(str, c))))
    return components[0] if components else set()


def average_shortest_path(g: GraphLike) -> PathLength:
    """
    Mean BFS distance over node pairs of the largest connected component.

    A component of a single node has no pairs and yields NaN.

    Examples:
        path on 3 nodes -> 4/3
    """
    graph = _nx(g)
    component = largest_component(graph)
    if len(component) < 2:
        value = float("nan")
    else:
        value = float(nx.average_shortest_path_length(graph.subgraph(component)))
    return PathLength(value, len(component), graph.number_of_nodes())


def connected_component_count(g: GraphLike) -> int:
    return nx.number_connected_components(_nx(g))


def _realizations(
    build: Callable[[int], nx.Graph], n_realizations: int, workers: int
) -> tuple[np.ndarray, np.ndarray]:
    """Clustering and path length of ``build(index)`` for every realization index."""
    validate_workers(workers)

    def measure(index: int) -> tuple[float, float]:
        graph = build(index)
        return clustering_coefficient(graph), average_shortest_path(graph).value

    if workers == 1:
        results = [measure(k) for k in range(n_realizations)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(measure, range(n_realizations)))
    values = np.array(results, dtype=np.float64).reshape(n_realizations, 2)
    return values[:, 0], values[:, 1]


def small_world_sigma(
    g: GraphLike,
    n_realizations: int = RANDOM_GRAPH_REALIZATIONS,
    seed: int = 0,
    workers: int = DEFAULT_WORKERS,
) -> BenchmarkResult:
    """
    sigma = (C / mean C_rand) / (L / mean L_rand) against edge-matched G(n, m) graphs.

    Realization k uses the seed derived from (seed, k), so the benchmark does
    not depend on the worker count.
    """
    if n_realizations < 1:
        raise ValidationError(f"Need at least one realization, got {n_realizations}")
    graph = _nx(g)
    n, m = graph.number_of_nodes(), graph.number_of_edges()
    clustering = clustering_coefficient(graph)
    path = average_shortest_path(graph).value

    def build(index: int) -> nx.Graph:
        return nx.gnm_random_graph(n, m, seed=integer_seed(seed, "random_graph", index))

    rand_c, rand_l = _realizations(build, n_realizations, workers)
    mean_c, mean_l = float(np.nanmean(rand_c)), float(np.nanmean(rand_l))
    if mean_c > 0 and path > 0 and mean_l > 0:
        sigma = (clustering / mean_c) / (path / mean_l)
    else:
        sigma = float("nan")
    logger.info(
        f"Small-world benchmark over {n_realizations} G(n={n}, m={m}) graphs: "
        f"C={clustering:.4g} vs {mean_c:.4g}, L={path:.4g} vs {mean_l:.4g}, sigma={sigma:.4g}"
    )
    return BenchmarkResult(
        clustering=clustering,
        path_length=path,
        random_clustering=rand_c,
        random_path_length=rand_l,
        sigma=sigma,
        n_nodes=n,
        n_edges=m,
    )


def lattice_degree(mean_degree: float, n_nodes: int) -> int:
    """Even integer nearest the mean degree, kept within [2, n - 1]."""
    k = 2 * int(math.floor(mean_degree / 2.0 + 0.5))
    upper = n_nodes - 1 if (n_nodes - 1) % 2 == 0 else n_nodes - 2
    return max(2, min(k, upper))


def watts_strogatz_benchmark(
    g: GraphLike,
    beta: float = WATTS_STROGATZ_BETA,
    n_realizations: int = WATTS_STROGATZ_REALIZATIONS,
    seed: int = 0,
    workers: int = DEFAULT_WORKERS,
) -> WattsStrogatzResult:
    """
    Clustering and path-length distributions of Watts-Strogatz graphs.

    The graphs match the node count; k is the even integer nearest the
    observed mean degree.
    """
    validate_fraction(beta, "Rewiring probability", allow_zero=True)
    if n_realizations < 1:
        raise ValidationError(f"Need at least one realization, got {n_realizations}")
    graph = _nx(g)
    n = graph.number_of_nodes()
    if n < 3:
        raise ValidationError(f"Watts-Strogatz benchmark needs at least 3 nodes, got {n}")
    mean_degree = 2.0 * graph.number_of_edges() / n
    k = lattice_degree(mean_degree, n)

    def build(index: int) -> nx.Graph:
        return nx.watts_strogatz_graph(n, k, beta, seed=integer_seed(seed, "watts_strogatz", index))

    clustering, path = _realizations(build, n_realizations, workers)
    logger.info(f"Watts-Strogatz benchmark: n={n}, k={k}, beta={beta}, {n_realizations} graphs")
    return WattsStrogatzResult(
        n_nodes=n,
        k=k,
        beta=beta,
        clustering=DistributionSummary.of(clustering),
        path_length=DistributionSummary.of(path),
    )


def sector_assortativity(g: GraphLike, attribute: str = "sector") -> float:
    """
    Discrete assortativity (sum e_ii - sum a_i b_i) / (1 - sum a_i b_i) over sectors.

    A graph whose edges all stay within sectors scores 1 even when only one
    sector occurs. Graphs without edges give NaN. Nodes of sector "unknown"
    and their edges are left out.
    """
    graph = _nx(g)
    known = [node for node, label in graph.nodes(data=attribute) if label != UNKNOWN_SECTOR]
    if len(known) < graph.number_of_nodes():
        dropped = graph.number_of_nodes() - len(known)
        logger.warning(f"Sector assortativity: {dropped} stock(s) with unknown sector left out")
        graph = graph.subgraph(known)
    if graph.number_of_edges() == 0:
        return float("nan")
    labels = sorted({data for _, data in graph.nodes(data=attribute)})
    mapping = {label: k for k, label in enumerate(labels)}
    mixing = nx.attribute_mixing_matrix(graph, attribute, mapping=mapping, normalized=True)
    trace = float(np.trace(mixing))
    expected = float(mixing.sum(axis=1) @ mixing.sum(axis=0))
    if math.isclose(expected, 1.0):
        return 1.0 if math.isclose(trace, 1.0) else float("nan")
    return (trace - expected) / (1.0 - expected)
