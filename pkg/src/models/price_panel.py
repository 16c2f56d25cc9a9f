"""Open/close price panel."""

from dataclasses import dataclass
from datetime import date

import numpy as np

from src.lib.errors import ValidationError


def _frozen(values: np.ndarray, dtype: type) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class PricePanel:
    """Daily open and close prices for N tickers over T dates.

    Missing cells are NaN. Present prices are strictly positive.

    Attributes:
        dates: Strictly increasing trading dates
        tickers: Ticker symbols, one per column
        sectors: Canonical sector label per ticker ("unknown" if not classified)
        open: T x N opening prices
        close: T x N closing prices
    """

    dates: tuple[date, ...]
    tickers: tuple[str, ...]
    sectors: tuple[str, ...]
    open: np.ndarray
    close: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "sectors", tuple(self.sectors))
        object.__setattr__(self, "open", _frozen(self.open, np.float64))
        object.__setattr__(self, "close", _frozen(self.close, np.float64))

        shape = (len(self.dates), len(self.tickers))
        if self.open.shape != shape or self.close.shape != shape:
            raise ValidationError(
                f"Price matrices must have shape {shape}, got open {self.open.shape} "
                f"and close {self.close.shape}"
            )
        if len(self.sectors) != len(self.tickers):
            raise ValidationError("One sector label is required per ticker")
        if len(set(self.tickers)) != len(self.tickers):
            raise ValidationError("Tickers must be unique")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise ValidationError("Dates must be strictly increasing")
        for name, matrix in (("open", self.open), ("close", self.close)):
            present = matrix[~np.isnan(matrix)]
            if np.any(present <= 0) or np.any(~np.isfinite(present)):
                raise ValidationError(f"All present {name} prices must be positive and finite")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.dates), len(self.tickers)

    def missing_mask(self) -> np.ndarray:
        """True where open or close is missing."""
        return np.isnan(self.open) | np.isnan(self.close)
