"""Empirical statistics of a spin panel: moments, breadth and lag-1 correlations."""

from collections.abc import Sequence
from dataclasses import dataclass
from datetime import date

import numpy as np
from scipy import stats

from src.lib.config import BREADTH_HISTOGRAM_BINS
from src.lib.errors import InsufficientDataError
from src.models.histogram import Histogram
from src.models.moments import MomentSet
from src.models.spin_panel import SpinPanel


@dataclass(frozen=True)
class Lag1Correlation:
    """corr(s_i(t+1), s_j(t)) for every ordered pair.

    ``degenerate[i, j]`` marks pairs where one of the two series is constant;
    their value is 0.
    """

    values: np.ndarray
    degenerate: np.ndarray


def empirical_moments(panel: SpinPanel) -> MomentSet:
    """
    Time averages of s_i and s_i s_j.

    Examples:
        >>> p = SpinPanel.from_array([[1, 1], [-1, -1], [1, -1]])
        >>> empirical_moments(p).m2[0, 1]
        0.3333333333333333
    """
    return MomentSet.from_samples(panel.spins)


def breadth_series(panel: SpinPanel) -> np.ndarray:
    """Cross-sectional mean spin for every day."""
    return panel.spins.mean(axis=1, dtype=np.float64)


def breadth(panel: SpinPanel, t: int) -> float:
    """Market breadth (1/N) sum_i s_i(t) of day index ``t``."""
    return float(panel.spins[t].mean(dtype=np.float64))


def breadth_histogram(panel: SpinPanel, bins: int = BREADTH_HISTOGRAM_BINS) -> Histogram:
    """Histogram of daily breadth over [-1, 1]; counts sum to T."""
    return Histogram.from_values(breadth_series(panel), bins, value_range=(-1.0, 1.0))


def lag1_cross_correlation(panel: SpinPanel) -> Lag1Correlation:
    """
    Pearson correlation of s_i(t+1) with s_j(t) over t = 1..T-1.

    Raises:
        InsufficientDataError: T < 3
    """
    if panel.T < 3:
        raise InsufficientDataError("lag-1 cross-correlation", 3, panel.T)

    s = panel.as_float()
    nxt, cur = s[1:], s[:-1]
    nxt_c = nxt - nxt.mean(axis=0)
    cur_c = cur - cur.mean(axis=0)
    cov = nxt_c.T @ cur_c / nxt.shape[0]
    std_next = np.sqrt((nxt_c**2).mean(axis=0))
    std_cur = np.sqrt((cur_c**2).mean(axis=0))

    denom = np.outer(std_next, std_cur)
    degenerate = denom == 0
    corr = np.zeros_like(cov)
    np.divide(cov, denom, out=corr, where=~degenerate)
    return Lag1Correlation(values=np.clip(corr, -1.0, 1.0), degenerate=degenerate)


def window_mask(dates: Sequence[date], start: date, end: date) -> np.ndarray:
    """True for dates inside the inclusive range [start, end]."""
    return np.array([start <= d <= end for d in dates], dtype=bool)


def window_mean(panel: SpinPanel, start: date, end: date) -> float:
    """
    Mean breadth over the days inside [start, end].

    Raises:
        InsufficientDataError: No day falls inside the window
    """
    mask = window_mask(panel.dates, start, end)
    if not mask.any():
        raise InsufficientDataError(f"window {start}..{end}", 1, 0)
    return float(breadth_series(panel)[mask].mean())


def spearman(x: np.ndarray, y: np.ndarray) -> float:
    """
    Spearman rank correlation with average ranks for ties.

    Returns NaN when fewer than two points are given or either series is constant.
    """
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    if a.size < 2 or np.ptp(a) == 0 or np.ptp(b) == 0:
        return float("nan")
    return float(stats.spearmanr(a, b).statistic)


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    """Pearson correlation, NaN for constant or too-short input."""
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    if a.size < 2 or np.ptp(a) == 0 or np.ptp(b) == 0:
        return float("nan")
    return float(stats.pearsonr(a, b).statistic)
