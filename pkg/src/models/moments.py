"""First and second moments of a spin distribution."""

from dataclasses import dataclass

import numpy as np

from src.lib.errors import ValidationError

MOMENT_TOLERANCE = 1e-9  # Slack for floating-point round-off in the checks below


@dataclass(frozen=True)
class MomentSet:
    """Means ``m1`` (length N) and pairwise moments ``m2`` (N x N).

    ``m2`` is stored exactly symmetric with a unit diagonal; inputs that are
    symmetric only up to round-off are symmetrized on construction.
    """

    m1: np.ndarray
    m2: np.ndarray

    def __post_init__(self) -> None:
        m1 = np.array(self.m1, dtype=np.float64, copy=True)
        m2 = np.array(self.m2, dtype=np.float64, copy=True)
        n = m1.shape[0]

        if m1.ndim != 1 or m2.shape != (n, n):
            raise ValidationError(f"Moment shapes disagree: m1 {m1.shape}, m2 {m2.shape}")
        if not (np.all(np.isfinite(m1)) and np.all(np.isfinite(m2))):
            raise ValidationError("Moments must be finite")
        if np.max(np.abs(m2 - m2.T), initial=0.0) > MOMENT_TOLERANCE:
            raise ValidationError("Second moments must be symmetric")
        if np.max(np.abs(np.diag(m2) - 1.0), initial=0.0) > MOMENT_TOLERANCE:
            raise ValidationError("Second moments must have a unit diagonal")
        if np.max(np.abs(m1), initial=0.0) > 1 + MOMENT_TOLERANCE:
            raise ValidationError("First moments must lie in [-1, 1]")
        if np.max(np.abs(m2), initial=0.0) > 1 + MOMENT_TOLERANCE:
            raise ValidationError("Second moments must lie in [-1, 1]")

        m1 = np.clip(m1, -1.0, 1.0)
        m2 = np.clip(0.5 * (m2 + m2.T), -1.0, 1.0)
        np.fill_diagonal(m2, 1.0)
        m1.setflags(write=False)
        m2.setflags(write=False)
        object.__setattr__(self, "m1", m1)
        object.__setattr__(self, "m2", m2)

    @property
    def n(self) -> int:
        return self.m1.shape[0]

    def connected_correlations(self) -> np.ndarray:
        """Pearson correlations implied by the moments; zero-variance rows give 0."""
        cov = self.m2 - np.outer(self.m1, self.m1)
        std = np.sqrt(np.clip(1.0 - self.m1**2, 0.0, None))
        denom = np.outer(std, std)
        with np.errstate(divide="ignore", invalid="ignore"):
            corr = np.where(denom > 0, cov / np.where(denom > 0, denom, 1.0), 0.0)
        np.fill_diagonal(corr, 1.0)
        return corr

    @classmethod
    def from_samples(cls, samples: np.ndarray, weights: np.ndarray | None = None) -> "MomentSet":
        """
        Moments of a sample matrix (rows = configurations).

        Args:
            samples: K x N array of +1/-1
            weights: Optional probabilities per row (sum to one)
        """
        s = np.asarray(samples, dtype=np.float64)
        if weights is None:
            k = s.shape[0]
            m1 = s.mean(axis=0)
            m2 = (s.T @ s) / k
        else:
            p = np.asarray(weights, dtype=np.float64)
            m1 = p @ s
            m2 = s.T @ (p[:, None] * s)
        return cls(m1, m2)
