"""Static (equilibrium) pairwise Ising model and its fit configuration."""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from src.lib import config
from src.lib.errors import ValidationError

STEP_SCHEDULES = ("constant", "decay")
INIT_MODES = ("zeros", "mean_field")
SCAN_ORDERS = ("systematic", "random")


@dataclass(frozen=True)
class StaticIsingModel:
    """Fields ``h`` (length N) and symmetric zero-diagonal couplings ``J``.

    Probability of a configuration s is proportional to
    exp(sum_i h_i s_i + sum_{i<j} J_ij s_i s_j).
    """

    h: np.ndarray
    J: np.ndarray
    tickers: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        h = np.array(self.h, dtype=np.float64, copy=True)
        J = np.array(self.J, dtype=np.float64, copy=True)
        n = h.shape[0]
        if h.ndim != 1 or J.shape != (n, n):
            raise ValidationError(f"Parameter shapes disagree: h {h.shape}, J {J.shape}")
        if not (np.all(np.isfinite(h)) and np.all(np.isfinite(J))):
            raise ValidationError("Model parameters must be finite")
        if not np.allclose(J, J.T, rtol=0.0, atol=1e-12):
            raise ValidationError("Static couplings must be symmetric")
        if np.any(np.diag(J) != 0):
            raise ValidationError("Static couplings must have a zero diagonal")

        J = 0.5 * (J + J.T)
        h.setflags(write=False)
        J.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "J", J)
        tickers = tuple(self.tickers) or tuple(f"S{i:03d}" for i in range(n))
        if len(tickers) != n:
            raise ValidationError(f"Expected {n} tickers, got {len(tickers)}")
        object.__setattr__(self, "tickers", tickers)

    @property
    def n(self) -> int:
        return self.h.shape[0]

    def upper_triangle(self) -> np.ndarray:
        """Strict upper triangle of J in row-major order."""
        return self.J[np.triu_indices(self.n, k=1)]

    @classmethod
    def from_upper(
        cls, h: Sequence[float], upper: Sequence[float], tickers: Sequence[str] = ()
    ) -> "StaticIsingModel":
        """Rebuild a model from fields and the row-major strict upper triangle of J."""
        h_arr = np.asarray(h, dtype=np.float64)
        n = h_arr.shape[0]
        upper_arr = np.asarray(upper, dtype=np.float64)
        if upper_arr.shape != (n * (n - 1) // 2,):
            raise ValidationError(
                f"Upper triangle for N={n} needs {n * (n - 1) // 2} values, got {upper_arr.size}"
            )
        J = np.zeros((n, n))
        rows, cols = np.triu_indices(n, k=1)
        J[rows, cols] = upper_arr
        J[cols, rows] = upper_arr
        return cls(h_arr, J, tuple(tickers))

    @classmethod
    def zeros(cls, n: int, tickers: Sequence[str] = ()) -> "StaticIsingModel":
        return cls(np.zeros(n), np.zeros((n, n)), tuple(tickers))


@dataclass(frozen=True)
class GibbsConfig:
    """Sampler hyperparameters.

    One sweep visits every site once; ``scan="random"`` visits them in a fresh
    random permutation each sweep. ``workers`` splits chains across threads and
    never changes the samples.
    """

    n_chains: int = config.GIBBS_N_CHAINS
    burn_in_sweeps: int = config.GIBBS_BURN_IN_SWEEPS
    sweeps_per_sample: int = config.GIBBS_SWEEPS_PER_SAMPLE
    n_samples: int = config.GIBBS_N_SAMPLES
    seed: int = 0
    scan: str = "systematic"
    workers: int = config.DEFAULT_WORKERS

    def __post_init__(self) -> None:
        if self.n_chains < 1:
            raise ValidationError(f"n_chains must be positive, got {self.n_chains}")
        if self.burn_in_sweeps < 0:
            raise ValidationError(f"burn_in_sweeps must be >= 0, got {self.burn_in_sweeps}")
        if self.sweeps_per_sample < 1:
            raise ValidationError(
                f"sweeps_per_sample must be positive, got {self.sweeps_per_sample}"
            )
        if self.n_samples < 1:
            raise ValidationError(f"n_samples must be positive, got {self.n_samples}")
        if not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.scan not in SCAN_ORDERS:
            raise ValidationError(f"scan must be one of {SCAN_ORDERS}, got {self.scan!r}")
        if self.workers < 1:
            raise ValidationError(f"workers must be positive, got {self.workers}")

    @property
    def total_samples(self) -> int:
        return self.n_chains * self.n_samples


@dataclass(frozen=True)
class StaticFitConfig:
    """Moment-matching ascent settings."""

    max_iterations: int = config.STATIC_MAX_ITERATIONS
    step_size: float = config.STATIC_STEP_SIZE
    step_schedule: str = config.STATIC_STEP_SCHEDULE
    tolerance: float = config.STATIC_TOLERANCE
    gibbs: GibbsConfig = field(default_factory=GibbsConfig)
    init: str = config.STATIC_INIT
    exact: bool = False

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValidationError(f"max_iterations must be positive, got {self.max_iterations}")
        if not self.step_size > 0:
            raise ValidationError(f"step_size must be positive, got {self.step_size}")
        if self.step_schedule not in STEP_SCHEDULES:
            raise ValidationError(
                f"step_schedule must be one of {STEP_SCHEDULES}, got {self.step_schedule!r}"
            )
        if not self.tolerance > 0:
            raise ValidationError(f"tolerance must be positive, got {self.tolerance}")
        if self.init not in INIT_MODES:
            raise ValidationError(f"init must be one of {INIT_MODES}, got {self.init!r}")

    def step_at(self, iteration: int) -> float:
        """Step size for a 1-based iteration number."""
        if self.step_schedule == "decay":
            return self.step_size / float(np.sqrt(iteration))
        return self.step_size


@dataclass(frozen=True)
class TraceRow:
    iteration: int
    max_abs_residual: float
    rms_residual: float
    step_size: float


@dataclass
class StaticFitTrace:
    """Per-iteration residuals of a static fit."""

    rows: list[TraceRow] = field(default_factory=list)
    converged: bool = False
    smoothed_residual: float = float("nan")

    @property
    def iterations(self) -> int:
        return len(self.rows)

    @property
    def final_max_abs_residual(self) -> float:
        return self.rows[-1].max_abs_residual if self.rows else float("nan")

    @property
    def final_rms_residual(self) -> float:
        return self.rows[-1].rms_residual if self.rows else float("nan")
