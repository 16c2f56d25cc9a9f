"""Filtered interaction graphs, backbones and prominent-node selection.

Every ranking breaks ties by (ticker_i, ticker_j) in lexicographic order, so
edge counts are exact and outputs are reproducible.
"""

import logging
import math
from collections.abc import Sequence

import networkx as nx
import numpy as np
import pandas as pd

from src.lib.config import (
    BACKBONE_EXTRA_FRACTION,
    FILTER_FRACTION,
    PROMINENCE_PERCENTILE,
    PROMINENCE_TOP_FRACTION,
)
from src.lib.errors import ValidationError
from src.lib.validators import validate_fraction, validate_percentile
from src.models.interaction_graph import BackboneGraph, InteractionGraph, ProminenceResult

logger = logging.getLogger(__name__)

SYMMETRY_ATOL = 1e-12


def symmetrize(couplings: np.ndarray) -> np.ndarray:
    """(J + J^T) / 2 with a zero diagonal."""
    J = np.asarray(couplings, dtype=np.float64)
    sym = 0.5 * (J + J.T)
    np.fill_diagonal(sym, 0.0)
    return sym


def undirected_couplings(couplings: np.ndarray, symmetrize_input: bool = False) -> np.ndarray:
    """
    Couplings ready for an undirected analysis.

    Raises:
        ValidationError: Input is not symmetric and ``symmetrize_input`` is off
    """
    J = np.asarray(couplings, dtype=np.float64)
    if J.ndim != 2 or J.shape[0] != J.shape[1]:
        raise ValidationError(f"Coupling matrix must be square, got shape {J.shape}")
    if symmetrize_input:
        return symmetrize(J)
    if not np.allclose(J, J.T, rtol=0.0, atol=SYMMETRY_ATOL):
        raise ValidationError(
            "Directed couplings passed to an undirected analysis; "
            "set symmetrize to average J and J^T"
        )
    return J


def node_strength(couplings: np.ndarray) -> np.ndarray:
    """sum_j |J_ij| for every node (diagonal excluded)."""
    magnitude = np.abs(np.asarray(couplings, dtype=np.float64))
    return magnitude.sum(axis=1) - np.abs(np.diag(magnitude))


def _ranked_pairs(magnitude: np.ndarray, tickers: Sequence[str]) -> tuple[np.ndarray, np.ndarray]:
    """Upper-triangle pairs sorted by descending magnitude, ties by ticker pair."""
    iu, ju = np.triu_indices(len(tickers), k=1)
    names = np.asarray(tickers, dtype=object)
    first = np.where(names[iu] <= names[ju], names[iu], names[ju]).astype(str)
    second = np.where(names[iu] <= names[ju], names[ju], names[iu]).astype(str)
    order = np.lexsort((second, first, -magnitude[iu, ju]))
    return iu[order], ju[order]


def filter_top_fraction(
    couplings: np.ndarray,
    tickers: Sequence[str],
    sectors: Sequence[str],
    h: np.ndarray | None = None,
    fraction: float = FILTER_FRACTION,
    symmetrize_input: bool = False,
) -> InteractionGraph:
    """
    Keep the ceil(fraction * N(N-1)/2) strongest couplings as graph edges.

    Zero couplings are never turned into edges, so ``fraction=1`` yields the
    complete graph on nonzero couplings. Every ticker is a node.

    Args:
        couplings: N x N coupling matrix
        tickers: Node labels
        sectors: Sector label per node
        h: Optional fields stored as the ``h`` node attribute
        fraction: Share of pairs retained, in (0, 1]
        symmetrize_input: Average J and J^T first (for directed input)

    Returns:
        InteractionGraph with ``cutoff`` = smallest retained |J_ij|

    Examples:
        10 pairs with distinct magnitudes and fraction 0.2 keep the 2 largest.
    """
    validate_fraction(fraction, "Filter fraction")
    J = undirected_couplings(couplings, symmetrize_input)
    n = J.shape[0]
    if len(tickers) != n or len(sectors) != n:
        raise ValidationError(f"Need {n} tickers and sectors for a {n} x {n} coupling matrix")

    magnitude = np.abs(J)
    pair_count = n * (n - 1) // 2
    keep = min(pair_count, math.ceil(fraction * pair_count - 1e-9))
    rows, cols = _ranked_pairs(magnitude, tickers)
    rows, cols = rows[:keep], cols[:keep]
    nonzero = magnitude[rows, cols] > 0
    rows, cols = rows[nonzero], cols[nonzero]

    graph = nx.Graph()
    fields = np.zeros(n) if h is None else np.asarray(h, dtype=np.float64)
    strength = node_strength(J)
    for k, ticker in enumerate(tickers):
        graph.add_node(
            ticker, sector=sectors[k], h=float(fields[k]), strength=float(strength[k]), index=k
        )
    for i, j in zip(rows, cols):
        graph.add_edge(
            tickers[i], tickers[j], weight=float(J[i, j]), abs_weight=float(magnitude[i, j])
        )

    cutoff = float(magnitude[rows[-1], cols[-1]]) if rows.size else float("nan")
    logger.info(
        f"Filtered {pair_count} pairs to {graph.number_of_edges()} edges "
        f"(fraction {fraction}, cutoff {cutoff:.5g})"
    )
    return InteractionGraph(graph=graph, cutoff=cutoff, pair_count=pair_count)


def _edge_key(graph: nx.Graph, u: str, v: str) -> tuple[float, str, str]:
    a, b = sorted((u, v))
    return (-graph.edges[u, v]["abs_weight"], a, b)


def backbone(
    interaction: InteractionGraph, extra_fraction: float = BACKBONE_EXTRA_FRACTION
) -> BackboneGraph:
    """
    Maximum spanning forest on |J| plus the strongest non-tree edges.

    Extras are added until the backbone holds round(extra_fraction * E) edges,
    E being the input edge count. A forest that already reaches that size gets
    no extras.
    """
    validate_fraction(extra_fraction, "Backbone fraction", allow_zero=True)
    source = interaction.graph
    edges = (tuple(sorted(e)) for e in source.edges())
    ranked = sorted(edges, key=lambda e: _edge_key(source, *e))
    forest = nx.utils.UnionFind(source.nodes())
    tree: list[tuple[str, str]] = []
    for u, v in ranked:
        if forest[u] != forest[v]:
            forest.union(u, v)
            tree.append((u, v))
    tree_edges = tuple(tree)

    target = int(math.floor(extra_fraction * source.number_of_edges() + 0.5))
    in_tree = set(tree_edges)
    candidates = [e for e in ranked if e not in in_tree]
    extra_edges = tuple(candidates[: max(target - len(tree_edges), 0)])

    graph = nx.Graph()
    graph.add_nodes_from(source.nodes(data=True))
    graph.add_edges_from((u, v, source.edges[u, v]) for u, v in tree_edges + extra_edges)
    logger.info(
        f"Backbone: {len(tree_edges)} tree edges + {len(extra_edges)} extras "
        f"from {source.number_of_edges()} input edges"
    )
    return BackboneGraph(
        graph=graph,
        tree_edges=tree_edges,
        extra_edges=extra_edges,
        input_edges=source.number_of_edges(),
    )


def prominence_select(
    h: np.ndarray,
    couplings: np.ndarray,
    tickers: Sequence[str],
    top_fraction: float = PROMINENCE_TOP_FRACTION,
    percentile: float = PROMINENCE_PERCENTILE,
) -> ProminenceResult:
    """
    Rank stocks by distance from the origin of the rescaled (|h|, strength) plane.

    Both axes are divided by their ``percentile``-th percentile (linear
    interpolation), and the ceil(top_fraction * N) largest radial distances
    are selected, ties by ticker. A zero scale leaves that axis at 0 and
    marks the result degenerate, as does a set of identical distances.
    """
    validate_fraction(top_fraction, "Top fraction")
    validate_percentile(percentile, "Prominence percentile")
    abs_h = np.abs(np.asarray(h, dtype=np.float64))
    strength = node_strength(couplings)
    n = abs_h.size
    if strength.size != n or len(tickers) != n:
        raise ValidationError("h, J and tickers disagree on the number of stocks")

    h_scale = float(np.percentile(abs_h, percentile))
    s_scale = float(np.percentile(strength, percentile))
    x = abs_h / h_scale if h_scale > 0 else np.zeros(n)
    y = strength / s_scale if s_scale > 0 else np.zeros(n)
    radial = np.hypot(x, y)

    count = min(n, max(1, math.ceil(top_fraction * n - 1e-9)))
    order = sorted(range(n), key=lambda k: (-radial[k], tickers[k]))
    selected = tuple(tickers[k] for k in order[:count])
    degenerate = h_scale == 0 or s_scale == 0 or bool(np.ptp(radial) == 0)
    if degenerate:
        logger.warning("Prominence ranking is degenerate; selection falls back to ticker order")
    return ProminenceResult(
        tickers=tuple(tickers),
        abs_h=abs_h,
        strength=strength,
        radial=radial,
        selected=selected,
        boundary_radius=float(radial[order[count - 1]]),
        h_scale=h_scale,
        strength_scale=s_scale,
        degenerate=degenerate,
    )


def prominence_frame(result: ProminenceResult) -> pd.DataFrame:
    chosen = set(result.selected)
    return pd.DataFrame(
        {
            "ticker": list(result.tickers),
            "abs_h": result.abs_h,
            "strength": result.strength,
            "x": result.abs_h / result.h_scale if result.h_scale > 0 else 0.0,
            "y": result.strength / result.strength_scale if result.strength_scale > 0 else 0.0,
            "radial": result.radial,
            "selected": [t in chosen for t in result.tickers],
        }
    )


def edge_frame(graph: nx.Graph) -> pd.DataFrame:
    """Edge list ``ticker_i,ticker_j,weight,abs_weight``, strongest first."""
    rows = []
    for u, v in sorted(graph.edges(), key=lambda e: _edge_key(graph, *e)):
        a, b = sorted((u, v))
        data = graph.edges[u, v]
        rows.append((a, b, data["weight"], data["abs_weight"]))
    return pd.DataFrame(rows, columns=["ticker_i", "ticker_j", "weight", "abs_weight"])


def node_frame(graph: nx.Graph) -> pd.DataFrame:
    """Node list ``ticker,sector,h,strength`` in input order."""
    nodes = sorted(graph.nodes(data=True), key=lambda item: item[1].get("index", 0))
    return pd.DataFrame(
        [(name, data["sector"], data["h"], data["strength"]) for name, data in nodes],
        columns=["ticker", "sector", "h", "strength"],
    )
