"""Kinetic (synchronous) Ising model with a hat-basis external field."""

from collections.abc import Sequence
from dataclasses import dataclass, field
from datetime import date

import numpy as np

from src.lib import config
from src.lib.errors import ValidationError

DIRECTIONS = ("newton", "gradient")


def hat_values(n_basis: int, t_len: int) -> np.ndarray:
    """
    Hat basis evaluated on every transition of a T-day panel.

    Row r (0-based transition index, r = 0..T-2) sits at tau = r / (T - 2);
    column m is the hat centred on c_m = m / (M - 1) with half-width 1 / (M - 1).

    Args:
        n_basis: Number of basis functions M (>= 2)
        t_len: Panel length T (>= 3)

    Returns:
        (T-1) x M array of basis values
    """
    if n_basis < 2:
        raise ValidationError(f"Hat basis needs M >= 2, got {n_basis}")
    if t_len < 3:
        raise ValidationError(f"Hat basis needs T >= 3, got {t_len}")
    tau = np.arange(t_len - 1, dtype=np.float64) / (t_len - 2)
    centers = np.arange(n_basis, dtype=np.float64) / (n_basis - 1)
    width = 1.0 / (n_basis - 1)
    return np.maximum(1.0 - np.abs(tau[:, None] - centers[None, :]) / width, 0.0)


@dataclass(frozen=True)
class HatBasis:
    """Precomputed hat basis for a panel of length ``t_len``."""

    n_basis: int
    t_len: int
    values: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        values = hat_values(self.n_basis, self.t_len)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n_transitions(self) -> int:
        return self.t_len - 1

    def second_difference(self) -> np.ndarray:
        """(M-2) x M second-difference operator (empty for M = 2)."""
        m = self.n_basis
        d = np.zeros((max(m - 2, 0), m))
        for row in range(m - 2):
            d[row, row : row + 3] = (1.0, -2.0, 1.0)
        return d


@dataclass(frozen=True)
class KineticIsingModel:
    """Directed kinetic Ising model.

    theta_i(t) = sum_m phi_m(t) gamma_im + a_i s_i(t) + sum_{j != i} J_ij s_j(t)
    with row i of J the target and column j the source.
    """

    gamma: np.ndarray
    a: np.ndarray
    J: np.ndarray
    basis: HatBasis
    tickers: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        gamma = np.array(self.gamma, dtype=np.float64, copy=True)
        a = np.array(self.a, dtype=np.float64, copy=True)
        J = np.array(self.J, dtype=np.float64, copy=True)
        n = a.shape[0]
        if a.ndim != 1 or J.shape != (n, n) or gamma.shape != (n, self.basis.n_basis):
            raise ValidationError(
                f"Parameter shapes disagree: gamma {gamma.shape}, a {a.shape}, J {J.shape}, "
                f"M={self.basis.n_basis}"
            )
        for name, arr in (("gamma", gamma), ("a", a), ("J", J)):
            if not np.all(np.isfinite(arr)):
                raise ValidationError(f"Kinetic parameter {name} must be finite")
        if np.any(np.diag(J) != 0):
            raise ValidationError("Directed couplings must have a zero diagonal")
        for arr in (gamma, a, J):
            arr.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "J", J)
        tickers = tuple(self.tickers) or tuple(f"S{i:03d}" for i in range(n))
        if len(tickers) != n:
            raise ValidationError(f"Expected {n} tickers, got {len(tickers)}")
        object.__setattr__(self, "tickers", tickers)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def external_fields(self) -> np.ndarray:
        """(T-1) x N matrix of h_i(t)."""
        return self.basis.values @ self.gamma.T

    @classmethod
    def zeros(cls, n: int, basis: HatBasis, tickers: Sequence[str] = ()) -> "KineticIsingModel":
        return cls(
            np.zeros((n, basis.n_basis)), np.zeros(n), np.zeros((n, n)), basis, tuple(tickers)
        )


@dataclass(frozen=True)
class PenaltyConfig:
    """Ridge weights and the second-difference smoothness weight on gamma."""

    l2_gamma: float = config.KINETIC_L2_GAMMA
    l2_a: float = config.KINETIC_L2_A
    l2_j: float = config.KINETIC_L2_J
    smooth_gamma: float = config.KINETIC_SMOOTH_GAMMA

    def __post_init__(self) -> None:
        for name in ("l2_gamma", "l2_a", "l2_j", "smooth_gamma"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0):
                raise ValidationError(f"Penalty {name} must be a nonnegative number, got {value}")

    def as_dict(self) -> dict[str, float]:
        return {
            "l2_gamma": float(self.l2_gamma),
            "l2_a": float(self.l2_a),
            "l2_j": float(self.l2_j),
            "smooth_gamma": float(self.smooth_gamma),
        }


@dataclass(frozen=True)
class KineticFitConfig:
    """Per-stock optimizer settings."""

    n_basis: int = config.KINETIC_BASIS_COUNT
    penalties: PenaltyConfig = field(default_factory=PenaltyConfig)
    max_iterations: int = config.KINETIC_MAX_ITERATIONS
    tolerance: float = config.KINETIC_TOLERANCE
    direction: str = config.KINETIC_DIRECTION
    step_size: float = config.KINETIC_STEP_SIZE
    workers: int = config.DEFAULT_WORKERS

    def __post_init__(self) -> None:
        if self.n_basis < 2:
            raise ValidationError(f"Basis count must be >= 2, got {self.n_basis}")
        if self.max_iterations < 1:
            raise ValidationError(f"max_iterations must be positive, got {self.max_iterations}")
        if not self.tolerance > 0:
            raise ValidationError(f"tolerance must be positive, got {self.tolerance}")
        if self.direction not in DIRECTIONS:
            raise ValidationError(f"direction must be one of {DIRECTIONS}, got {self.direction!r}")
        if not self.step_size > 0:
            raise ValidationError(f"step_size must be positive, got {self.step_size}")
        if self.workers < 1:
            raise ValidationError(f"workers must be positive, got {self.workers}")


@dataclass(frozen=True)
class StockFitTrace:
    """Convergence record of one stock's fit."""

    ticker: str
    iterations: int
    converged: bool
    objective: float
    gradient_max_abs: float


@dataclass(frozen=True)
class FieldDecomposition:
    """Market-average field components per transition day.

    ``dates[k]`` is the day t whose state drives the prediction for t+1.
    """

    dates: tuple[date, ...]
    external: np.ndarray
    self_term: np.ndarray
    interaction: np.ndarray
    total: np.ndarray
    per_stock: dict[str, np.ndarray] | None = None
