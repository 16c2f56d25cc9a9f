"""Diagnostics of a fitted kinetic model against the panel it was fitted on.

Transition index t pairs the state on ``panel.dates[t]`` with the movement on
``panel.dates[t + 1]``; windowed statistics select transitions by
``dates[t]``.
"""

import logging
from collections.abc import Mapping
from dataclasses import dataclass
from datetime import date

import numpy as np
import pandas as pd
from scipy.special import expit

from src.lib.config import CALIBRATION_BINS, DEFAULT_WINDOWS, FULL_SAMPLE_WINDOW, TOP_K
from src.lib.errors import ValidationError
from src.lib.validators import validate_window
from src.models.kinetic_ising import FieldDecomposition, KineticIsingModel
from src.models.spin_panel import SpinPanel
from src.services.analytics.sector_analysis import known_sector_indices
from src.services.kinetic_dynamics import local_fields
from src.services.panel_statistics import breadth_series, lag1_cross_correlation, spearman

logger = logging.getLogger(__name__)


def _components(model: KineticIsingModel, panel: SpinPanel) -> tuple[np.ndarray, ...]:
    # local_fields validates panel/model compatibility
    local_fields(model, panel)
    cur = panel.as_float()[:-1]
    return model.external_fields(), cur * model.a, cur @ model.J.T


def field_decomposition(
    model: KineticIsingModel, panel: SpinPanel, per_stock: bool = False
) -> FieldDecomposition:
    """
    Market averages of the external, self-memory and interaction parts of theta.

    ``total`` is the sum of the three averaged parts, so the identity holds
    exactly at every t.
    """
    external, self_term, interaction = _components(model, panel)
    ext_bar = external.mean(axis=1)
    self_bar = self_term.mean(axis=1)
    inter_bar = interaction.mean(axis=1)
    stocks = None
    if per_stock:
        stocks = {
            "external": external,
            "self": self_term,
            "interaction": interaction,
            "total": external + self_term + interaction,
        }
    return FieldDecomposition(
        dates=panel.dates[:-1],
        external=ext_bar,
        self_term=self_bar,
        interaction=inter_bar,
        total=ext_bar + self_bar + inter_bar,
        per_stock=stocks,
    )


def decomposition_frame(decomposition: FieldDecomposition) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "date": [d.isoformat() for d in decomposition.dates],
            "external": decomposition.external,
            "self": decomposition.self_term,
            "interaction": decomposition.interaction,
            "total": decomposition.total,
        }
    )


@dataclass(frozen=True)
class MarketFitReport:
    """Predicted vs empirical next-day market mean, plus windowed field averages.

    ``windows`` columns: window, start, end, days, mean_external, mean_total,
    mean_predicted, mean_empirical. Windows without days carry NaN means.
    """

    dates: tuple[date, ...]
    predicted: np.ndarray
    empirical: np.ndarray
    spearman: float
    external_mean: float
    external_std: float
    spearman_external: float
    spearman_total: float
    windows: pd.DataFrame

    def series_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "date": [d.isoformat() for d in self.dates],
                "predicted": self.predicted,
                "empirical": self.empirical,
            }
        )


def market_fit_report(
    model: KineticIsingModel,
    panel: SpinPanel,
    windows: Mapping[str, tuple[date, date]] | None = None,
) -> MarketFitReport:
    """
    Compare (1/N) sum_i tanh theta_i(t) with the observed breadth on day t+1.

    Args:
        model: Fitted kinetic model
        panel: Panel the model was fitted on
        windows: Named inclusive date ranges (defaults to the standard four)

    Raises:
        ValidationError: A window is reversed or uses the reserved full-sample name
    """
    theta = local_fields(model, panel)
    predicted = np.tanh(theta).mean(axis=1)
    empirical = breadth_series(panel)[1:]
    decomposition = field_decomposition(model, panel)
    h_bar, theta_bar = decomposition.external, decomposition.total

    ranges = {FULL_SAMPLE_WINDOW: (panel.dates[0], panel.dates[-1])}
    for name, (start, end) in (DEFAULT_WINDOWS if windows is None else windows).items():
        ranges[name] = validate_window(name, start, end)
    starts = np.array(decomposition.dates, dtype="datetime64[D]")
    rows = []
    for name, (start, end) in ranges.items():
        mask = (starts >= np.datetime64(start, "D")) & (starts <= np.datetime64(end, "D"))
        days = int(mask.sum())
        if days == 0:
            logger.info(f"Window '{name}' ({start}..{end}) has no days in the panel")
        rows.append(
            {
                "window": name,
                "start": start.isoformat(),
                "end": end.isoformat(),
                "days": days,
                "mean_external": float(h_bar[mask].mean()) if days else np.nan,
                "mean_total": float(theta_bar[mask].mean()) if days else np.nan,
                "mean_predicted": float(predicted[mask].mean()) if days else np.nan,
                "mean_empirical": float(empirical[mask].mean()) if days else np.nan,
            }
        )

    return MarketFitReport(
        dates=decomposition.dates,
        predicted=predicted,
        empirical=empirical,
        spearman=spearman(predicted, empirical),
        external_mean=float(h_bar.mean()),
        external_std=float(h_bar.std()),
        spearman_external=spearman(h_bar, empirical),
        spearman_total=spearman(theta_bar, empirical),
        windows=pd.DataFrame(rows),
    )


def calibration_table(
    model: KineticIsingModel, panel: SpinPanel, bins: int = CALIBRATION_BINS
) -> pd.DataFrame:
    """
    Bin every stock-day by predicted P(s_i(t+1) = +1) and count up-moves.

    Bins are [k/bins, (k+1)/bins) with the last closed at 1. Columns:
    bin_lo, bin_hi, count, empirical_freq (NaN when empty), mean_predicted.
    """
    if bins < 1:
        raise ValidationError(f"Calibration needs at least one bin, got {bins}")
    prob = expit(2.0 * local_fields(model, panel)).ravel()
    ups = (panel.spins[1:] > 0).ravel()
    index = np.minimum((prob * bins).astype(np.int64), bins - 1)

    counts = np.bincount(index, minlength=bins)
    up_counts = np.bincount(index, weights=ups.astype(np.float64), minlength=bins)
    prob_sums = np.bincount(index, weights=prob, minlength=bins)
    with np.errstate(invalid="ignore", divide="ignore"):
        freq = np.where(counts > 0, up_counts / counts, np.nan)
        mean_pred = np.where(counts > 0, prob_sums / counts, np.nan)

    edges = np.arange(bins + 1) / bins
    return pd.DataFrame(
        {
            "bin_lo": edges[:-1],
            "bin_hi": edges[1:],
            "count": counts.astype(np.int64),
            "empirical_freq": freq,
            "mean_predicted": mean_pred,
        }
    )


def model_lag1_correlations(model: KineticIsingModel, panel: SpinPanel) -> np.ndarray:
    """
    Model-implied corr(s_i(t+1), s_j(t)) from the conditional moments.

    Uses tanh theta_i(t) as E[s_i(t+1) | s(t)]; the variance of s_i(t+1) is
    mean(1 - tanh^2) + var(tanh). The source side uses the empirical std of
    s_j(t). Entries with a zero standard deviation are 0.
    """
    mu = np.tanh(local_fields(model, panel))
    cur = panel.as_float()[:-1]
    count = mu.shape[0]
    cov = mu.T @ cur / count - np.outer(mu.mean(axis=0), cur.mean(axis=0))
    var_next = 1.0 - np.mean(mu**2, axis=0) + mu.var(axis=0)
    std_next = np.sqrt(np.maximum(var_next, 0.0))
    std_cur = cur.std(axis=0)

    denom = np.outer(std_next, std_cur)
    corr = np.zeros_like(cov)
    np.divide(cov, denom, out=corr, where=denom > 0)
    return np.clip(corr, -1.0, 1.0)


def lag1_comparison_frame(model: KineticIsingModel, panel: SpinPanel) -> pd.DataFrame:
    """Off-diagonal pairs ``ticker_i,ticker_j,empirical,model`` (i = target, j = source)."""
    empirical = lag1_cross_correlation(panel).values
    implied = model_lag1_correlations(model, panel)
    rows, cols = np.nonzero(~np.eye(panel.N, dtype=bool))
    return pd.DataFrame(
        {
            "ticker_i": [panel.tickers[i] for i in rows],
            "ticker_j": [panel.tickers[j] for j in cols],
            "empirical": empirical[rows, cols],
            "model": implied[rows, cols],
        }
    )


def per_stock_prediction_frame(model: KineticIsingModel, panel: SpinPanel) -> pd.DataFrame:
    """Time-averaged predicted vs realized next-day spin per stock."""
    mu = np.tanh(local_fields(model, panel))
    return pd.DataFrame(
        {
            "ticker": list(panel.tickers),
            "sector": list(panel.sectors),
            "predicted_mean": mu.mean(axis=0),
            "empirical_mean": panel.as_float()[1:].mean(axis=0),
        }
    )


def sector_field_frame(model: KineticIsingModel, panel: SpinPanel) -> pd.DataFrame:
    """Average external field h_i(t) over the stocks of each known sector, per day."""
    keep = known_sector_indices(panel.sectors, "Sector fields")
    dates = [d.isoformat() for d in panel.dates[:-1]]
    if keep.size == 0:
        return pd.DataFrame({"date": dates})
    fields = pd.DataFrame(
        model.external_fields()[:, keep], columns=[panel.tickers[k] for k in keep]
    )
    by_sector = fields.T.groupby([panel.sectors[k] for k in keep], sort=True).mean().T
    by_sector.insert(0, "date", dates)
    return by_sector


@dataclass(frozen=True)
class SelfMemorySummary:
    """Distribution of the self-memory coefficients a_i."""

    mean: float
    median: float
    fraction_positive: float
    fraction_negative: float
    top_positive: tuple[tuple[str, float], ...]
    top_negative: tuple[tuple[str, float], ...]


def self_memory_summary(model: KineticIsingModel, top_k: int = TOP_K) -> SelfMemorySummary:
    """
    Mean, median, sign fractions and extreme entries of a.

    Zero coefficients count half toward each sign, so the fractions always sum
    to one. Ranked lists break ties by ticker.

    Examples:
        a = (-1, 1) gives mean 0 and fraction_positive 0.5.
    """
    a = model.a
    n = a.size
    zeros = float(np.sum(a == 0))
    order = sorted(range(n), key=lambda i: (-a[i], model.tickers[i]))
    positive = [(model.tickers[i], float(a[i])) for i in order if a[i] > 0][:top_k]
    order = sorted(range(n), key=lambda i: (a[i], model.tickers[i]))
    negative = [(model.tickers[i], float(a[i])) for i in order if a[i] < 0][:top_k]
    return SelfMemorySummary(
        mean=float(a.mean()),
        median=float(np.median(a)),
        fraction_positive=(float(np.sum(a > 0)) + 0.5 * zeros) / n,
        fraction_negative=(float(np.sum(a < 0)) + 0.5 * zeros) / n,
        top_positive=tuple(positive),
        top_negative=tuple(negative),
    )


def self_memory_frame(model: KineticIsingModel) -> pd.DataFrame:
    """All a_i sorted descending (ties by ticker): ``rank,ticker,a``."""
    order = sorted(range(model.n), key=lambda i: (-model.a[i], model.tickers[i]))
    return pd.DataFrame(
        {
            "rank": np.arange(1, model.n + 1),
            "ticker": [model.tickers[i] for i in order],
            "a": model.a[order],
        }
    )
