"""Histogram value type shared by panel and model reports."""

from dataclasses import dataclass

import numpy as np

from src.lib.errors import ValidationError


@dataclass(frozen=True)
class Histogram:
    """Bin edges (length bins+1) and integer counts (length bins)."""

    edges: np.ndarray
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @classmethod
    def from_values(
        cls, values: np.ndarray, bins: int, value_range: tuple[float, float] | None = None
    ) -> "Histogram":
        """Bin values with ``np.histogram``; the last bin is closed on the right."""
        if bins < 1:
            raise ValidationError(f"Histogram needs at least one bin, got {bins}")
        counts, edges = np.histogram(np.asarray(values, dtype=float), bins=bins, range=value_range)
        return cls(edges=edges, counts=counts.astype(np.int64))
