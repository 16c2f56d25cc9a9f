"""Moment-matching fit of the static Ising model.

Gradient ascent on the average log-likelihood: the gradient is the gap between
target and model moments. Model moments come from the exact oracle (small N,
``exact=True``) or from a fresh Gibbs run every iteration.
"""

import logging
from collections import deque
from dataclasses import dataclass, replace

import numpy as np
import pandas as pd

from src.lib.config import ATANH_CLIP, ORACLE_MAX_N, STATIC_RESIDUAL_WINDOW
from src.lib.errors import DivergenceError, OracleSizeError, ValidationError
from src.lib.random_streams import integer_seed
from src.models.moments import MomentSet
from src.models.spin_panel import SpinPanel
from src.models.static_ising import (
    GibbsConfig,
    StaticFitConfig,
    StaticFitTrace,
    StaticIsingModel,
    TraceRow,
)
from src.services.gibbs_sampler import model_moments_mc
from src.services.panel_statistics import empirical_moments
from src.services.static_exact import exact_moments

logger = logging.getLogger(__name__)


def static_gradient(target: MomentSet, model_moments: MomentSet) -> tuple[np.ndarray, np.ndarray]:
    """
    Log-likelihood gradient as moment differences.

    Returns:
        (grad_h, grad_J): grad_J is symmetric with a zero diagonal
    """
    if target.n != model_moments.n:
        raise ValidationError(f"Moment sizes differ: {target.n} vs {model_moments.n}")
    grad_h = target.m1 - model_moments.m1
    grad_j = target.m2 - model_moments.m2
    np.fill_diagonal(grad_j, 0.0)
    return grad_h, grad_j


def _residuals(grad_h: np.ndarray, grad_j: np.ndarray) -> np.ndarray:
    iu = np.triu_indices(grad_h.shape[0], k=1)
    return np.concatenate([grad_h, grad_j[iu]])


def _model_moments(
    model: StaticIsingModel, cfg: StaticFitConfig, iteration: int
) -> MomentSet:
    if cfg.exact:
        return exact_moments(model)
    # Fresh sampler randomness every iteration; the run is still fixed by the seed.
    gibbs = replace(cfg.gibbs, seed=integer_seed(cfg.gibbs.seed, "fit_iteration", iteration))
    return model_moments_mc(model, gibbs)


def initial_fields(target: MomentSet, init: str) -> np.ndarray:
    """Starting fields: zeros, or atanh of the clipped means (independent-spin optimum)."""
    if init == "zeros":
        return np.zeros(target.n)
    return np.arctanh(np.clip(target.m1, -ATANH_CLIP, ATANH_CLIP))


def fit_static(
    target: MomentSet, cfg: StaticFitConfig, tickers: tuple[str, ...] = ()
) -> tuple[StaticIsingModel, StaticFitTrace]:
    """
    Fit h and J so that model moments match ``target``.

    Trace row k holds the residual of the parameters entering iteration k and
    the step then taken. The stopping rule compares the mean max-abs residual
    of the last five iterations against the tolerance (the last one only in
    exact mode, where there is no sampling noise). On convergence the returned
    model is the one whose residual was recorded last.

    Raises:
        ValidationError: Fewer than two stocks
        OracleSizeError: Exact mode requested for N > 20
        DivergenceError: Parameters became non-finite
    """
    n = target.n
    if n < 2:
        raise ValidationError(f"Static fit needs at least 2 stocks, got {n}")
    if cfg.exact and n > ORACLE_MAX_N:
        raise OracleSizeError(n, ORACLE_MAX_N)

    h = initial_fields(target, cfg.init)
    couplings = np.zeros((n, n))
    window = 1 if cfg.exact else STATIC_RESIDUAL_WINDOW
    recent: deque[float] = deque(maxlen=window)
    trace = StaticFitTrace()

    mode = "exact" if cfg.exact else f"Gibbs ({cfg.gibbs.total_samples} samples)"
    logger.info(f"Static fit: N={n}, {mode}, step={cfg.step_size} ({cfg.step_schedule})")

    for iteration in range(1, cfg.max_iterations + 1):
        model = StaticIsingModel(h, couplings, tickers)
        grad_h, grad_j = static_gradient(target, _model_moments(model, cfg, iteration))
        residual = _residuals(grad_h, grad_j)
        max_abs = float(np.max(np.abs(residual)))
        rms = float(np.sqrt(np.mean(residual**2)))
        step = cfg.step_at(iteration)
        trace.rows.append(TraceRow(iteration, max_abs, rms, step))

        recent.append(max_abs)
        if len(recent) == window:
            trace.smoothed_residual = float(np.mean(recent))
            if trace.smoothed_residual <= cfg.tolerance:
                trace.converged = True
                logger.info(
                    f"Static fit converged after {iteration} iterations "
                    f"(residual {trace.smoothed_residual:.3g})"
                )
                return model, trace

        if iteration % 25 == 0:
            logger.debug(f"iteration {iteration}: max-abs {max_abs:.4g}, rms {rms:.4g}")

        h = h + step * grad_h
        couplings = couplings + step * grad_j
        if not (np.all(np.isfinite(h)) and np.all(np.isfinite(couplings))):
            raise DivergenceError("static fit", iteration)

    logger.warning(
        f"Static fit stopped at max_iterations={cfg.max_iterations} "
        f"(residual {trace.smoothed_residual:.3g} > tolerance {cfg.tolerance})"
    )
    return StaticIsingModel(h, couplings, tickers), trace


def trace_frame(trace: StaticFitTrace) -> pd.DataFrame:
    """Fit trace as ``iteration,max_abs_residual,rms_residual,step_size``."""
    return pd.DataFrame(
        [(r.iteration, r.max_abs_residual, r.rms_residual, r.step_size) for r in trace.rows],
        columns=["iteration", "max_abs_residual", "rms_residual", "step_size"],
    )


@dataclass(frozen=True)
class StaticValidationReport:
    """Empirical vs model moments for every mean and every off-diagonal pair.

    ``rows`` columns: kind (mean|pair), ticker_i, ticker_j, empirical, model,
    empirical_corr, model_corr (correlations only for pairs).
    """

    rows: pd.DataFrame
    max_abs_residual: float
    rms_residual: float
    max_abs_corr_residual: float


def validate_static(
    model: StaticIsingModel,
    panel: SpinPanel,
    cfg: GibbsConfig | None = None,
    exact: bool = False,
) -> StaticValidationReport:
    """
    Compare panel moments with the fitted model's moments.

    Args:
        model: Fitted model
        panel: Panel the model should reproduce
        cfg: Sampler settings (ignored in exact mode)
        exact: Use the enumeration oracle (N <= 20)
    """
    if model.n != panel.N:
        raise ValidationError(f"Model has {model.n} stocks, panel has {panel.N}")
    empirical = empirical_moments(panel)
    if exact:
        predicted = exact_moments(model)
    else:
        predicted = model_moments_mc(model, cfg or GibbsConfig())

    emp_corr = empirical.connected_correlations()
    mod_corr = predicted.connected_correlations()
    tickers = panel.tickers
    iu, ju = np.triu_indices(panel.N, k=1)

    means = pd.DataFrame(
        {
            "kind": "mean",
            "ticker_i": list(tickers),
            "ticker_j": "",
            "empirical": empirical.m1,
            "model": predicted.m1,
            "empirical_corr": np.nan,
            "model_corr": np.nan,
        }
    )
    pairs = pd.DataFrame(
        {
            "kind": "pair",
            "ticker_i": [tickers[i] for i in iu],
            "ticker_j": [tickers[j] for j in ju],
            "empirical": empirical.m2[iu, ju],
            "model": predicted.m2[iu, ju],
            "empirical_corr": emp_corr[iu, ju],
            "model_corr": mod_corr[iu, ju],
        }
    )
    rows = pd.concat([means, pairs], ignore_index=True)

    residual = (rows["empirical"] - rows["model"]).to_numpy()
    corr_residual = (pairs["empirical_corr"] - pairs["model_corr"]).to_numpy()
    return StaticValidationReport(
        rows=rows,
        max_abs_residual=float(np.max(np.abs(residual))),
        rms_residual=float(np.sqrt(np.mean(residual**2))),
        max_abs_corr_residual=float(np.max(np.abs(corr_residual), initial=0.0)),
    )
