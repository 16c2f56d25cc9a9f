"""Directed-coupling diagnostics and static/kinetic comparisons."""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd

from src.lib.config import PARAMETER_HISTOGRAM_BINS
from src.lib.errors import ValidationError
from src.models.histogram import Histogram
from src.services.analytics.network_filtering import node_strength
from src.services.panel_statistics import pearson, spearman


def _square(couplings: np.ndarray) -> np.ndarray:
    J = np.asarray(couplings, dtype=np.float64)
    if J.ndim != 2 or J.shape[0] != J.shape[1]:
        raise ValidationError(f"Coupling matrix must be square, got shape {J.shape}")
    return J


def directed_strengths(couplings: np.ndarray, tickers: Sequence[str]) -> pd.DataFrame:
    """
    Incoming (row), outgoing (column) and total absolute coupling per stock.

    J_ij is the influence of source j on target i, so in_strength(i) =
    sum_j |J_ij| and out_strength(j) = sum_i |J_ij|. The diagonal is ignored.
    """
    magnitude = np.abs(_square(couplings))
    np.fill_diagonal(magnitude, 0.0)
    incoming = magnitude.sum(axis=1)
    outgoing = magnitude.sum(axis=0)
    return pd.DataFrame(
        {
            "ticker": list(tickers),
            "in_strength": incoming,
            "out_strength": outgoing,
            "total_strength": incoming + outgoing,
        }
    )


def asymmetry_index(couplings: np.ndarray) -> float:
    """
    ||J - J^T||_F / ||J||_F: 0 for symmetric, 2 for antisymmetric, NaN for J = 0.

    Uncorrelated J_ij and J_ji give about sqrt(2).
    """
    J = _square(couplings)
    norm = float(np.linalg.norm(J, "fro"))
    if norm == 0:
        return float("nan")
    return float(np.linalg.norm(J - J.T, "fro")) / norm


def symmetry_correlations(couplings: np.ndarray) -> tuple[float, float]:
    """(Spearman, Pearson) between J_ij and J_ji over pairs i < j."""
    J = _square(couplings)
    iu, ju = np.triu_indices(J.shape[0], k=1)
    return spearman(J[iu, ju], J[ju, iu]), pearson(J[iu, ju], J[ju, iu])


def directed_coupling_summary(couplings: np.ndarray) -> dict[str, float]:
    """Mean, std, mean |J| and 90th percentile |J| over off-diagonal entries."""
    J = _square(couplings)
    off = J[~np.eye(J.shape[0], dtype=bool)]
    if off.size == 0:
        return {"mean": np.nan, "std": np.nan, "mean_abs": np.nan, "p90_abs": np.nan}
    return {
        "mean": float(off.mean()),
        "std": float(off.std()),
        "mean_abs": float(np.abs(off).mean()),
        "p90_abs": float(np.percentile(np.abs(off), 90)),
    }


@dataclass(frozen=True)
class StrengthComparison:
    """Static strength paired with kinetic strengths, one row per stock."""

    table: pd.DataFrame
    spearman_total: float
    spearman_in: float
    spearman_out: float


def static_vs_kinetic_strength(
    static_couplings: np.ndarray, kinetic_couplings: np.ndarray, tickers: Sequence[str]
) -> StrengthComparison:
    """Rank agreement between static node strength and kinetic total/in/out strength."""
    static = _square(static_couplings)
    kinetic = _square(kinetic_couplings)
    if static.shape != kinetic.shape:
        raise ValidationError(
            f"Static and kinetic couplings differ in shape: {static.shape} vs {kinetic.shape}"
        )
    table = directed_strengths(kinetic, tickers).rename(
        columns={
            "in_strength": "kinetic_in",
            "out_strength": "kinetic_out",
            "total_strength": "kinetic_total",
        }
    )
    table.insert(1, "static_strength", node_strength(static))
    return StrengthComparison(
        table=table,
        spearman_total=spearman(table["static_strength"], table["kinetic_total"]),
        spearman_in=spearman(table["static_strength"], table["kinetic_in"]),
        spearman_out=spearman(table["static_strength"], table["kinetic_out"]),
    )


def parameter_histograms(
    h: np.ndarray, couplings: np.ndarray, bins: int = PARAMETER_HISTOGRAM_BINS
) -> tuple[Histogram, Histogram]:
    """Histograms of the N fields and of the N(N-1)/2 unique couplings."""
    J = _square(couplings)
    iu = np.triu_indices(J.shape[0], k=1)
    return Histogram.from_values(np.asarray(h), bins), Histogram.from_values(J[iu], bins)


def histogram_frame(histogram: Histogram) -> pd.DataFrame:
    """``bin_lo,bin_hi,count`` rows."""
    return pd.DataFrame(
        {
            "bin_lo": histogram.edges[:-1],
            "bin_hi": histogram.edges[1:],
            "count": histogram.counts,
        }
    )
