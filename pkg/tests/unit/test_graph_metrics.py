"""Unit tests for graph metrics and random-graph benchmarks."""

import itertools
import logging
import math

import networkx as nx
import numpy as np
import pytest

from src.lib.errors import ValidationError
from src.services.analytics.graph_metrics import (
    average_shortest_path,
    clustering_coefficient,
    lattice_degree,
    sector_assortativity,
    small_world_sigma,
    watts_strogatz_benchmark,
)


def _labelled(graph: nx.Graph, sectors: dict) -> nx.Graph:
    nx.set_node_attributes(graph, sectors, "sector")
    return graph


def _random_gnm(seed: int) -> nx.Graph:
    """G(n, m) with n in [5, 30] and m between n / 2 and 3n edges."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 31))
    m = int(rng.integers(n // 2, min(3 * n, n * (n - 1) // 2) + 1))
    return nx.gnm_random_graph(n, m, seed=seed)


def _enumerated_clustering(graph: nx.Graph) -> float:
    """Average local clustering from an explicit count of closed triangles."""
    adjacency = nx.to_numpy_array(graph, nodelist=sorted(graph.nodes()))
    total = 0.0
    for v in range(len(adjacency)):
        neighbours = np.flatnonzero(adjacency[v])
        k = neighbours.size
        if k < 2:
            continue
        links = sum(adjacency[a, b] for a, b in itertools.combinations(neighbours, 2))
        total += 2.0 * links / (k * (k - 1))
    return total / len(adjacency)


def _floyd_warshall_path_length(graph: nx.Graph) -> float:
    """Mean distance over pairs of the largest component, from all-pairs relaxation."""
    nodes = sorted(graph.nodes())
    n = len(nodes)
    dist = np.where(nx.to_numpy_array(graph, nodelist=nodes) > 0, 1.0, np.inf)
    np.fill_diagonal(dist, 0.0)
    for k in range(n):
        dist = np.minimum(dist, dist[:, [k]] + dist[[k], :])
    components = {frozenset(np.flatnonzero(np.isfinite(dist[i]))) for i in range(n)}
    largest = min(components, key=lambda c: (-len(c), min(str(nodes[i]) for i in c)))
    if len(largest) < 2:
        return float("nan")
    members = sorted(largest)
    block = dist[np.ix_(members, members)]
    return float(block.sum() / (len(members) * (len(members) - 1)))


@pytest.mark.unit
class TestClustering:
    """Test suite for clustering_coefficient."""

    def test_triangle(self):
        """A triangle is fully clustered."""
        assert clustering_coefficient(nx.complete_graph(3)) == pytest.approx(1.0)

    def test_star(self):
        """A star has no triangles."""
        assert clustering_coefficient(nx.star_graph(5)) == 0.0

    def test_low_degree_nodes_count_as_zero(self):
        """A triangle with a pendant node averages in the pendant's zero."""
        graph = nx.complete_graph(3)
        graph.add_edge(2, 3)

        # node 2 has degree 3 with one triangle: 1/3
        assert clustering_coefficient(graph) == pytest.approx((1 + 1 + 1 / 3 + 0) / 4)

    def test_empty_graph(self):
        """No nodes, no clustering."""
        assert math.isnan(clustering_coefficient(nx.Graph()))

    @pytest.mark.parametrize("seed", range(50))
    def test_matches_triangle_enumeration(self, seed):
        """Random G(n, m) graphs agree with an explicit triangle count."""
        graph = _random_gnm(seed)

        assert clustering_coefficient(graph) == pytest.approx(_enumerated_clustering(graph))


@pytest.mark.unit
class TestShortestPath:
    """Test suite for average_shortest_path."""

    def test_path_of_three(self):
        """Distances 1, 1, 2 average to 4/3."""
        result = average_shortest_path(nx.path_graph(3))

        assert result.value == pytest.approx(4 / 3)
        assert result.note == "connected"

    def test_largest_component(self):
        """Only the largest component is measured and coverage is reported."""
        graph = nx.path_graph(3)
        graph.add_edge(10, 11)

        result = average_shortest_path(graph)

        assert result.value == pytest.approx(4 / 3)
        assert result.component_nodes == 3
        assert result.coverage == pytest.approx(0.6)
        assert result.note == "largest component covers 3 of 5 nodes"

    def test_isolated_nodes(self):
        """A graph without edges has no path length."""
        graph = nx.empty_graph(4)

        assert math.isnan(average_shortest_path(graph).value)

    @pytest.mark.parametrize("seed", range(50))
    def test_matches_floyd_warshall(self, seed):
        """Random G(n, m) graphs agree with all-pairs Floyd-Warshall distances."""
        graph = _random_gnm(seed)

        expected = _floyd_warshall_path_length(graph)
        result = average_shortest_path(graph)

        if math.isnan(expected):
            assert math.isnan(result.value)
        else:
            assert result.value == pytest.approx(expected)


@pytest.mark.unit
class TestSmallWorld:
    """Test suite for small_world_sigma."""

    def test_reproducible_and_worker_invariant(self):
        """Realizations depend on (seed, index) only."""
        graph = nx.connected_watts_strogatz_graph(30, 4, 0.1, seed=1)

        serial = small_world_sigma(graph, n_realizations=12, seed=5, workers=1)
        parallel = small_world_sigma(graph, n_realizations=12, seed=5, workers=4)

        np.testing.assert_array_equal(serial.random_clustering, parallel.random_clustering)
        assert serial.sigma == parallel.sigma
        assert serial.n_edges == graph.number_of_edges()

    def test_lattice_like_graph_is_small_world(self):
        """A lightly rewired ring lattice has sigma well above one."""
        graph = nx.connected_watts_strogatz_graph(60, 6, 0.05, seed=2)

        result = small_world_sigma(graph, n_realizations=20, seed=3)

        assert result.sigma > 1.5

    @pytest.mark.slow
    def test_random_graph_sigma_near_one(self):
        """Averaged over 20 G(n, m) graphs, sigma against G(n, m) benchmarks is 1 +- 0.05."""
        sigmas = [
            small_world_sigma(
                nx.gnm_random_graph(80, 400, seed=trial), n_realizations=50, seed=trial, workers=4
            ).sigma
            for trial in range(20)
        ]

        assert abs(np.mean(sigmas) - 1.0) < 0.05

    def test_invalid_realizations(self):
        """At least one realization is needed."""
        with pytest.raises(ValidationError):
            small_world_sigma(nx.path_graph(4), n_realizations=0)

    def test_invalid_workers(self):
        """At least one worker thread is needed."""
        with pytest.raises(ValidationError, match="Worker count"):
            small_world_sigma(nx.path_graph(4), n_realizations=2, workers=0)


@pytest.mark.unit
class TestWattsStrogatz:
    """Test suite for the Watts-Strogatz benchmark."""

    @pytest.mark.parametrize(
        "mean_degree,n_nodes,expected",
        [(3.1, 20, 4), (2.9, 20, 2), (0.5, 10, 2), (9.0, 6, 4), (7.0, 8, 6), (10.0, 40, 10)],
    )
    def test_lattice_degree(self, mean_degree, n_nodes, expected):
        """Nearest even degree, clamped to [2, n - 1]."""
        assert lattice_degree(mean_degree, n_nodes) == expected

    def test_distributions(self):
        """Quartiles are ordered and one sample is kept per realization."""
        graph = nx.gnm_random_graph(30, 90, seed=7)

        result = watts_strogatz_benchmark(graph, beta=0.5, n_realizations=15, seed=1)

        assert result.k == 6
        assert result.n_realizations == 15
        assert result.clustering.q1 <= result.clustering.median <= result.clustering.q3
        assert result.path_length.mean > 1.0

    def test_worker_invariant(self):
        """Threaded realizations match serial ones."""
        graph = nx.gnm_random_graph(20, 40, seed=8)

        serial = watts_strogatz_benchmark(graph, n_realizations=8, seed=2, workers=1)
        parallel = watts_strogatz_benchmark(graph, n_realizations=8, seed=2, workers=3)

        np.testing.assert_array_equal(serial.clustering.samples, parallel.clustering.samples)

    def test_too_few_nodes(self):
        """The lattice needs at least three nodes."""
        with pytest.raises(ValidationError, match="at least 3 nodes"):
            watts_strogatz_benchmark(nx.path_graph(2))

    def test_invalid_beta(self):
        """Rewiring probability lies in [0, 1]."""
        with pytest.raises(ValidationError, match="Rewiring"):
            watts_strogatz_benchmark(nx.path_graph(5), beta=1.5)


@pytest.mark.unit
class TestAssortativity:
    """Test suite for sector_assortativity."""

    def test_within_sector_only(self):
        """Two sector cliques with no links between them score 1."""
        graph = nx.disjoint_union(nx.complete_graph(3), nx.complete_graph(3))
        _labelled(graph, {0: "IT", 1: "IT", 2: "IT", 3: "Fin", 4: "Fin", 5: "Fin"})

        assert sector_assortativity(graph) == pytest.approx(1.0)

    def test_between_sectors_only(self):
        """A bipartite graph across two sectors scores -1."""
        graph = nx.complete_bipartite_graph(2, 2)
        _labelled(graph, {0: "IT", 1: "IT", 2: "Fin", 3: "Fin"})

        assert sector_assortativity(graph) == pytest.approx(-1.0)

    def test_single_sector(self):
        """Only one sector and all edges within it scores 1."""
        graph = _labelled(nx.path_graph(4), {k: "Energy" for k in range(4)})

        assert sector_assortativity(graph) == 1.0

    def test_no_edges(self):
        """A graph without edges has no assortativity."""
        graph = _labelled(nx.empty_graph(3), {k: "IT" for k in range(3)})

        assert math.isnan(sector_assortativity(graph))

    def test_unknown_sector_left_out(self, caplog):
        """Unknown-sector nodes and their edges do not count."""
        graph = nx.disjoint_union(nx.complete_graph(3), nx.complete_graph(3))
        graph.add_edges_from([(6, 0), (6, 3)])
        sectors = {0: "IT", 1: "IT", 2: "IT", 3: "Fin", 4: "Fin", 5: "Fin", 6: "unknown"}
        _labelled(graph, sectors)

        with caplog.at_level(logging.WARNING):
            value = sector_assortativity(graph)

        assert value == pytest.approx(1.0)
        assert "1 stock(s) with unknown sector" in caplog.text

    def test_matches_networkx(self):
        """Agrees with networkx's attribute assortativity on a mixed graph."""
        graph = nx.gnm_random_graph(24, 60, seed=9)
        _labelled(graph, {k: ("IT", "Fin", "Energy")[k % 3] for k in range(24)})

        assert sector_assortativity(graph) == pytest.approx(
            nx.attribute_assortativity_coefficient(graph, "sector")
        )
