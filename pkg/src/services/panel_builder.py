"""Binarization, completeness filtering and spin-panel persistence."""

import logging
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from src.lib.artifacts import write_csv
from src.lib.errors import EmptyPanelError, SchemaError
from src.models.price_panel import PricePanel
from src.models.sectors import SectorTable
from src.models.spin_panel import PartialSpinPanel, SpinPanel
from src.services.price_loader import parse_iso_dates, read_raw_csv

logger = logging.getLogger(__name__)


def binarize(prices: PricePanel) -> PartialSpinPanel:
    """
    Encode each (date, ticker) cell as +1 if close > open, else -1.

    Ties map to -1. Cells with a missing open or close are discarded (stored
    as 0) and counted per ticker.

    Args:
        prices: Open/close panel

    Returns:
        PartialSpinPanel with per-ticker missing counts
    """
    missing = prices.missing_mask()
    with np.errstate(invalid="ignore"):
        up = prices.close > prices.open
    spins = np.where(up, 1, -1).astype(np.int8)
    spins[missing] = 0

    counts = missing.sum(axis=0)
    missing_counts = {t: int(c) for t, c in zip(prices.tickers, counts)}
    total = int(counts.sum())
    if total:
        logger.info(f"Discarded {total} cells with a missing open or close price")
    return PartialSpinPanel(prices.dates, prices.tickers, prices.sectors, spins, missing_counts)


def filter_complete(partial: PartialSpinPanel, drop_dates: bool = False) -> SpinPanel:
    """
    Build a dense panel from a binarized panel with gaps.

    By default tickers with any discarded cell are dropped and every date is
    kept. With ``drop_dates`` the dates carrying a gap are dropped first, so
    every ticker survives on the remaining dates.

    Raises:
        EmptyPanelError: No ticker or no date survives
    """
    if not partial.tickers:
        raise EmptyPanelError("the price file has no tickers")
    observed = partial.observed
    if drop_dates:
        keep_rows = observed.all(axis=1) if observed.size else np.zeros(0, dtype=bool)
        keep_cols = np.ones(len(partial.tickers), dtype=bool)
        if not keep_rows.any():
            raise EmptyPanelError("no date has every ticker observed")
        logger.info(f"Dropped {int((~keep_rows).sum())} dates with missing observations")
    else:
        keep_rows = np.ones(len(partial.dates), dtype=bool)
        keep_cols = observed.all(axis=0) if observed.size else np.zeros(0, dtype=bool)
        if len(partial.dates) == 0:
            raise EmptyPanelError("the price file has no dates")
        if not keep_cols.any():
            raise EmptyPanelError("no ticker is observed on every date")
        dropped = [t for t, keep in zip(partial.tickers, keep_cols) if not keep]
        if dropped:
            logger.info(f"Dropped {len(dropped)} incomplete tickers: {', '.join(dropped)}")

    columns = np.flatnonzero(keep_cols)
    return SpinPanel(
        tuple(d for d, keep in zip(partial.dates, keep_rows) if keep),
        tuple(partial.tickers[c] for c in columns),
        tuple(partial.sectors[c] for c in columns),
        partial.spins[np.ix_(keep_rows, keep_cols)],
    )


def ingest_report(partial: PartialSpinPanel, panel: SpinPanel) -> dict[str, Any]:
    """Shape before and after filtering, with what was dropped and why."""
    kept = set(panel.tickers)
    dropped = [t for t in partial.tickers if t not in kept]
    return {
        "raw_shape": [len(partial.dates), len(partial.tickers)],
        "shape": [panel.T, panel.N],
        "dropped_tickers": dropped,
        "dropped_ticker_count": len(dropped),
        "dropped_date_count": len(partial.dates) - panel.T,
        "missing_cells": partial.total_missing,
        "missing_by_ticker": {t: c for t, c in partial.missing_counts.items() if c},
        "first_date": panel.dates[0].isoformat(),
        "last_date": panel.dates[-1].isoformat(),
        "sector_counts": {s: panel.sectors.count(s) for s in sorted(set(panel.sectors))},
    }


def spin_panel_frame(panel: SpinPanel) -> pd.DataFrame:
    """Panel as a frame: ``date`` column then one column per ticker."""
    frame = pd.DataFrame(panel.spins.astype(int), columns=list(panel.tickers))
    frame.insert(0, "date", [d.isoformat() for d in panel.dates])
    return frame


def save_spin_panel(panel: SpinPanel, path: Path | str) -> None:
    write_csv(Path(path), spin_panel_frame(panel))


def load_spin_panel(path: Path | str, sectors: SectorTable | None = None) -> SpinPanel:
    """
    Read a spin panel CSV written by ``save_spin_panel``.

    Raises:
        SchemaError: Bad header, bad date, or an entry other than -1/1
    """
    path = Path(path)
    raw = read_raw_csv(path)
    header = [str(c).strip() for c in raw.iloc[0].tolist()]
    if not header or header[0].lower() != "date" or len(header) < 2:
        raise SchemaError(path, "first column must be 'date' followed by ticker columns", line=1)
    tickers = tuple(header[1:])
    if len(set(tickers)) != len(tickers):
        raise SchemaError(path, "duplicate ticker columns in header", line=1)

    body = raw.iloc[1:].reset_index(drop=True)
    if body.empty:
        raise EmptyPanelError(f"{path} holds no dates")
    dates = tuple(parse_iso_dates(body.iloc[:, 0], path))

    values = body.iloc[:, 1:].apply(lambda col: col.str.strip())
    valid = values.isin(["1", "-1", "+1"]).to_numpy()
    if not valid.all():
        row, col = (int(v[0]) for v in np.nonzero(~valid))
        raise SchemaError(
            path,
            f"spin for {tickers[col]} must be -1 or 1, got {values.iat[row, col]!r}",
            line=row + 2,
        )
    spins = values.astype(int).to_numpy()
    labels = (sectors or SectorTable()).labels_for(tickers)
    return SpinPanel(dates, tickers, labels, spins)
