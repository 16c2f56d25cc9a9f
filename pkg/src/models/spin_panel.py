"""Binarized daily movement panels."""

from collections.abc import Sequence
from dataclasses import dataclass, field
from datetime import date

import numpy as np
import pandas as pd

from src.lib.config import UNKNOWN_SECTOR
from src.lib.errors import ValidationError

SYNTHETIC_START_DATE = date(2000, 1, 3)


def _frozen_spins(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=np.int8, copy=True)
    array.setflags(write=False)
    return array


def _check_labels(dates: Sequence[date], tickers: Sequence[str], sectors: Sequence[str]) -> None:
    if len(sectors) != len(tickers):
        raise ValidationError("One sector label is required per ticker")
    if len(set(tickers)) != len(tickers):
        raise ValidationError("Tickers must be unique")
    if any(b <= a for a, b in zip(dates, dates[1:])):
        raise ValidationError("Dates must be strictly increasing")


@dataclass(frozen=True)
class SpinPanel:
    """Dense T x N matrix of +1/-1 daily movements.

    Arrays are stored read-only so a panel can be shared between threads.
    """

    dates: tuple[date, ...]
    tickers: tuple[str, ...]
    sectors: tuple[str, ...]
    spins: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "sectors", tuple(self.sectors))
        object.__setattr__(self, "spins", _frozen_spins(self.spins))

        if self.spins.ndim != 2 or self.spins.shape != (len(self.dates), len(self.tickers)):
            raise ValidationError(
                f"Spin matrix shape {self.spins.shape} does not match "
                f"{len(self.dates)} dates x {len(self.tickers)} tickers"
            )
        if self.spins.shape[0] < 1 or self.spins.shape[1] < 1:
            raise ValidationError("Spin panel needs at least one date and one ticker")
        if not np.all(np.abs(self.spins) == 1):
            raise ValidationError("Spin entries must be exactly -1 or +1")
        _check_labels(self.dates, self.tickers, self.sectors)

    @property
    def T(self) -> int:  # noqa: N802
        return self.spins.shape[0]

    @property
    def N(self) -> int:  # noqa: N802
        return self.spins.shape[1]

    def as_float(self) -> np.ndarray:
        """Spins as a float64 array (new writable copy)."""
        return self.spins.astype(np.float64)

    def select_dates(self, mask: np.ndarray) -> "SpinPanel":
        """Sub-panel of the rows where ``mask`` is True."""
        mask = np.asarray(mask, dtype=bool)
        kept = tuple(d for d, keep in zip(self.dates, mask) if keep)
        return SpinPanel(kept, self.tickers, self.sectors, self.spins[mask])

    def select_tickers(self, columns: Sequence[int]) -> "SpinPanel":
        """Sub-panel of the given column indices, in the given order."""
        cols = list(columns)
        return SpinPanel(
            self.dates,
            tuple(self.tickers[c] for c in cols),
            tuple(self.sectors[c] for c in cols),
            self.spins[:, cols],
        )

    @classmethod
    def from_array(
        cls,
        spins: np.ndarray,
        dates: Sequence[date] | None = None,
        tickers: Sequence[str] | None = None,
        sectors: Sequence[str] | None = None,
    ) -> "SpinPanel":
        """
        Wrap a raw spin matrix, filling in synthetic labels.

        Missing dates become consecutive business days from 2000-01-03,
        missing tickers become S000, S001, ... and missing sectors "unknown".

        Args:
            spins: T x N array of +1/-1
            dates: Optional dates
            tickers: Optional tickers
            sectors: Optional sector labels
        """
        spins = np.asarray(spins)
        n_dates, n_tickers = spins.shape
        if dates is None:
            dates = tuple(
                ts.date() for ts in pd.bdate_range(SYNTHETIC_START_DATE, periods=n_dates)
            )
        if tickers is None:
            tickers = tuple(f"S{i:03d}" for i in range(n_tickers))
        if sectors is None:
            sectors = (UNKNOWN_SECTOR,) * n_tickers
        return cls(tuple(dates), tuple(tickers), tuple(sectors), spins)


@dataclass(frozen=True)
class PartialSpinPanel:
    """Binarized panel that still has gaps.

    ``spins`` holds +1/-1 for observed cells and 0 where a price was missing.
    ``missing_counts`` maps each ticker to its number of discarded cells.
    """

    dates: tuple[date, ...]
    tickers: tuple[str, ...]
    sectors: tuple[str, ...]
    spins: np.ndarray
    missing_counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "sectors", tuple(self.sectors))
        object.__setattr__(self, "spins", _frozen_spins(self.spins))
        if self.spins.shape != (len(self.dates), len(self.tickers)):
            raise ValidationError("Spin matrix shape does not match dates x tickers")
        if not np.all(np.isin(self.spins, (-1, 0, 1))):
            raise ValidationError("Partial spin entries must be -1, 0 or +1")
        _check_labels(self.dates, self.tickers, self.sectors)

    @property
    def observed(self) -> np.ndarray:
        """True for cells that carry a spin."""
        return self.spins != 0

    @property
    def total_missing(self) -> int:
        return int((self.spins == 0).sum())
