"""Sector-level aggregation of couplings and fields."""

import logging
from collections.abc import Sequence

import numpy as np
import pandas as pd

from src.lib.config import SECTOR_EDGE_PERCENTILE, UNKNOWN_SECTOR
from src.lib.errors import ValidationError
from src.lib.validators import validate_percentile
from src.models.interaction_graph import SectorMatrix, SectorNetwork
from src.services.analytics.network_filtering import undirected_couplings

logger = logging.getLogger(__name__)

MODES = ("signed", "abs")


def known_sector_indices(sectors: Sequence[str], what: str) -> np.ndarray:
    """Positions of stocks with a known sector; the rest are logged and left out."""
    keep = np.flatnonzero(np.asarray(sectors, dtype=object) != UNKNOWN_SECTOR)
    dropped = len(sectors) - keep.size
    if dropped:
        logger.warning(f"{what}: {dropped} stock(s) with unknown sector left out")
    return keep


def sector_matrices(
    couplings: np.ndarray,
    sectors: Sequence[str],
    mode: str = "signed",
    directed: bool = False,
    symmetrize_input: bool = False,
) -> SectorMatrix:
    """
    Mean J_ij (or |J_ij|) for every pair of sectors.

    Undirected mode averages unordered pairs i < j and returns a symmetric
    matrix. Directed mode averages ordered pairs i != j with rows indexed by
    the target's sector (i) and columns by the source's (j). Within and
    between means are pair-weighted over all same-sector and cross-sector
    pairs. Sector pairs without any stock pair hold NaN. Stocks of sector
    "unknown" take no part.

    Args:
        couplings: N x N coupling matrix
        sectors: Sector label per stock
        mode: "signed" or "abs"
        directed: Treat J as directed (kinetic couplings)
        symmetrize_input: Average J and J^T before an undirected analysis
    """
    if mode not in MODES:
        raise ValidationError(f"Sector matrix mode must be one of {MODES}, got {mode!r}")
    if directed:
        J = np.asarray(couplings, dtype=np.float64)
    else:
        J = undirected_couplings(couplings, symmetrize_input)
    n = J.shape[0]
    if len(sectors) != n:
        raise ValidationError(f"Need {n} sector labels, got {len(sectors)}")

    keep = known_sector_indices(sectors, "Sector matrix")
    J = J[np.ix_(keep, keep)]
    known = [sectors[k] for k in keep]
    n = keep.size
    labels = tuple(sorted(set(known)))
    code = np.array([labels.index(s) for s in known], dtype=np.int64)
    values = np.abs(J) if mode == "abs" else J
    if directed:
        rows, cols = np.nonzero(~np.eye(n, dtype=bool))
    else:
        rows, cols = np.triu_indices(n, k=1)
    pair_values = values[rows, cols]
    a, b = code[rows], code[cols]

    k = len(labels)
    sums = np.zeros((k, k))
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(sums, (a, b), pair_values)
    np.add.at(counts, (a, b), 1)
    if not directed:
        off = a != b
        np.add.at(sums, (b[off], a[off]), pair_values[off])
        np.add.at(counts, (b[off], a[off]), 1)

    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    same = a == b
    within = float(pair_values[same].mean()) if same.any() else float("nan")
    between = float(pair_values[~same].mean()) if (~same).any() else float("nan")
    return SectorMatrix(
        sectors=labels,
        values=means,
        counts=counts,
        mode=mode,
        directed=directed,
        within_mean=within,
        between_mean=between,
    )


def sector_matrix_frame(matrix: SectorMatrix) -> pd.DataFrame:
    """Square table with a leading ``sector`` column (row = target sector)."""
    frame = pd.DataFrame(matrix.values, columns=list(matrix.sectors))
    frame.insert(0, "sector", list(matrix.sectors))
    return frame


def sector_network_summary(
    couplings: np.ndarray,
    h: np.ndarray,
    sectors: Sequence[str],
    edge_percentile: float = SECTOR_EDGE_PERCENTILE,
    symmetrize_input: bool = False,
) -> SectorNetwork:
    """
    Sector graph: nodes carry mean |h_i| and mean within-sector |J_ij|, edges
    join sector pairs whose mean |J_ij| strictly exceeds the given percentile
    of all cross-sector means (percentile 0 keeps every link).
    """
    validate_percentile(edge_percentile, "Sector edge percentile")
    fields = np.abs(np.asarray(h, dtype=np.float64))
    if fields.size != len(sectors):
        raise ValidationError("h and sector labels disagree on the number of stocks")
    matrix = sector_matrices(couplings, sectors, mode="abs", symmetrize_input=symmetrize_input)
    labels = matrix.sectors
    label_array = np.asarray(sectors)
    mean_abs_h = {s: float(fields[label_array == s].mean()) for s in labels}

    iu, ju = np.triu_indices(len(labels), k=1)
    cross = matrix.values[iu, ju]
    present = ~np.isnan(cross)
    edges: dict[tuple[str, str], float] = {}
    threshold = float("nan")
    if present.any():
        threshold = float(np.percentile(cross[present], edge_percentile))
        for a, b, value in zip(iu[present], ju[present], cross[present]):
            if edge_percentile == 0 or value > threshold:
                edges[(labels[a], labels[b])] = float(value)
    logger.info(
        f"Sector network: {len(labels)} sectors, {len(edges)} links above "
        f"P{edge_percentile:g} = {threshold:.4g}"
    )
    return SectorNetwork(
        sectors=labels,
        mean_abs_h=mean_abs_h,
        within_abs_j=matrix.within_by_sector(),
        edges=edges,
        threshold=threshold,
    )


def sector_network_frames(network: SectorNetwork) -> tuple[pd.DataFrame, pd.DataFrame]:
    """Sector node table and cross-sector edge table."""
    nodes = pd.DataFrame(
        {
            "sector": list(network.sectors),
            "mean_abs_h": [network.mean_abs_h[s] for s in network.sectors],
            "within_abs_j": [network.within_abs_j[s] for s in network.sectors],
        }
    )
    edges = pd.DataFrame(
        [(a, b, w) for (a, b), w in network.edges.items()],
        columns=["sector_a", "sector_b", "mean_abs_j"],
    )
    return nodes, edges
