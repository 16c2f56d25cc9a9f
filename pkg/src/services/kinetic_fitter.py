"""Penalized conditional maximum-likelihood fit of the kinetic Ising model.

The likelihood and every penalty separate over target stocks, so stock i's
block (gamma_i, a_i, J_i.) is fitted on its own. Per stock the problem is a
ridge-penalized logistic regression of s_i(t+1) on the design
X(t) = [phi_1(t) .. phi_M(t), s_1(t) .. s_N(t)], where the coefficient on
s_i(t) is the self-memory a_i. The objective is concave in the block.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import pandas as pd
import scipy.linalg

from src.lib.config import ARMIJO_C, ARMIJO_MAX_HALVINGS
from src.lib.errors import ConfigurationError, DivergenceError, ValidationError
from src.models.kinetic_ising import (
    HatBasis,
    KineticFitConfig,
    KineticIsingModel,
    StockFitTrace,
)
from src.models.spin_panel import SpinPanel
from src.services.kinetic_dynamics import log2cosh

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StockBlock:
    """Fitted parameters of one target stock."""

    index: int
    gamma: np.ndarray
    a: float
    couplings: np.ndarray
    trace: StockFitTrace


def check_panel_length(t_len: int, n_basis: int) -> None:
    """The basis needs T >= M + 2 days."""
    if t_len < n_basis + 2:
        raise ConfigurationError(
            f"Kinetic fit with M={n_basis} basis functions needs T >= {n_basis + 2} days, "
            f"panel has T={t_len}"
        )


def _penalty_matrix(basis: HatBasis, n: int, i: int, cfg: KineticFitConfig) -> np.ndarray:
    """Hessian of stock i's penalty: 2 diag(l2) plus 2 smooth D'D on the gamma block."""
    m = basis.n_basis
    pen = cfg.penalties
    diagonal = np.full(m + n, pen.l2_j)
    diagonal[:m] = pen.l2_gamma
    diagonal[m + i] = pen.l2_a
    matrix = np.diag(2.0 * diagonal)
    d = basis.second_difference()
    matrix[:m, :m] += 2.0 * pen.smooth_gamma * (d.T @ d)
    return matrix


class _StockObjective:
    """Penalized average log-likelihood of one stock's next-day spin."""

    def __init__(self, design: np.ndarray, target: np.ndarray, penalty: np.ndarray):
        self.design = design
        self.target = target
        self.penalty = penalty
        self.count = design.shape[0]

    def value(self, w: np.ndarray) -> float:
        theta = self.design @ w
        loglik = np.sum(self.target * theta - log2cosh(theta)) / self.count
        return float(loglik - 0.5 * w @ self.penalty @ w)

    def gradient(self, w: np.ndarray) -> np.ndarray:
        residual = self.target - np.tanh(self.design @ w)
        return self.design.T @ residual / self.count - self.penalty @ w

    def curvature(self, w: np.ndarray) -> np.ndarray:
        """Negative Hessian (positive definite whenever any penalty is positive)."""
        weight = 1.0 - np.tanh(self.design @ w) ** 2
        return (self.design.T * weight) @ self.design / self.count + self.penalty


def _newton_direction(curvature: np.ndarray, grad: np.ndarray) -> np.ndarray:
    try:
        return scipy.linalg.solve(curvature, grad, assume_a="pos")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        return scipy.linalg.lstsq(curvature, grad)[0]


def fit_kinetic_stock(
    panel: SpinPanel, i: int, basis: HatBasis, cfg: KineticFitConfig
) -> StockBlock:
    """
    Fit the parameter block of target stock ``i``.

    Ascent directions are Newton steps (``direction="newton"``) or the raw
    gradient, each followed by Armijo backtracking from ``cfg.step_size``.
    The fit stops once the gradient max-abs is at most ``cfg.tolerance``.

    Raises:
        DivergenceError: Parameters or objective became non-finite
    """
    ticker = panel.tickers[i]
    spins = panel.as_float()
    design = np.hstack([basis.values, spins[:-1]])
    objective = _StockObjective(design, spins[1:, i], _penalty_matrix(basis, panel.N, i, cfg))

    w = np.zeros(design.shape[1])
    current = objective.value(w)
    grad = objective.gradient(w)
    converged = False
    iteration = 0
    for iteration in range(1, cfg.max_iterations + 1):
        if np.max(np.abs(grad)) <= cfg.tolerance:
            converged = True
            iteration -= 1
            break

        if cfg.direction == "newton":
            direction = _newton_direction(objective.curvature(w), grad)
        else:
            direction = grad
        slope = float(grad @ direction)

        step = cfg.step_size
        for _ in range(ARMIJO_MAX_HALVINGS):
            candidate = w + step * direction
            if not np.all(np.isfinite(candidate)):
                raise DivergenceError(f"kinetic fit of stock {ticker}", iteration)
            value = objective.value(candidate)
            if np.isfinite(value) and value >= current + ARMIJO_C * step * slope:
                break
            step *= 0.5
        else:
            logger.warning(f"{ticker}: line search stalled at iteration {iteration}")
            break

        w, current = candidate, value
        grad = objective.gradient(w)
        if not np.all(np.isfinite(grad)):
            raise DivergenceError(f"kinetic fit of stock {ticker}", iteration)
    else:
        converged = bool(np.max(np.abs(grad)) <= cfg.tolerance)

    m = basis.n_basis
    couplings = w[m:].copy()
    a = float(couplings[i])
    couplings[i] = 0.0
    trace = StockFitTrace(
        ticker=ticker,
        iterations=iteration,
        converged=converged,
        objective=current,
        gradient_max_abs=float(np.max(np.abs(grad))),
    )
    return StockBlock(i, w[:m].copy(), a, couplings, trace)


def fit_kinetic(
    panel: SpinPanel, cfg: KineticFitConfig | None = None
) -> tuple[KineticIsingModel, list[StockFitTrace]]:
    """
    Fit gamma, a and J for every stock.

    Stocks are independent tasks over a read-only panel; results land in
    disjoint rows, so the model does not depend on ``cfg.workers``.

    Raises:
        ConfigurationError: T < M + 2
        ValidationError: Fewer than two stocks
        DivergenceError: A stock's fit became non-finite (the stock is named)
    """
    cfg = cfg or KineticFitConfig()
    check_panel_length(panel.T, cfg.n_basis)
    if panel.N < 2:
        raise ValidationError(f"Kinetic fit needs at least 2 stocks, got {panel.N}")

    basis = HatBasis(cfg.n_basis, panel.T)
    logger.info(
        f"Kinetic fit: N={panel.N}, T={panel.T}, M={cfg.n_basis}, "
        f"direction={cfg.direction}, workers={cfg.workers}"
    )

    def task(i: int) -> StockBlock:
        return fit_kinetic_stock(panel, i, basis, cfg)

    if cfg.workers == 1:
        blocks = [task(i) for i in range(panel.N)]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            blocks = list(pool.map(task, range(panel.N)))

    gamma = np.stack([b.gamma for b in blocks])
    a = np.array([b.a for b in blocks])
    couplings = np.stack([b.couplings for b in blocks])
    traces = [b.trace for b in blocks]

    stalled = [t.ticker for t in traces if not t.converged]
    if stalled:
        logger.warning(
            f"{len(stalled)} stock(s) did not reach tolerance: {', '.join(stalled[:10])}"
        )
    else:
        logger.info("All stocks converged")
    return KineticIsingModel(gamma, a, couplings, basis, panel.tickers), traces


def per_stock_trace_frame(traces: list[StockFitTrace]) -> pd.DataFrame:
    """Convergence table ``ticker,iterations,converged,objective,gradient_max_abs``."""
    return pd.DataFrame(
        [(t.ticker, t.iterations, t.converged, t.objective, t.gradient_max_abs) for t in traces],
        columns=["ticker", "iterations", "converged", "objective", "gradient_max_abs"],
    )
