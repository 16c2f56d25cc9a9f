"""Kinetic Ising dynamics: local fields, transition law, likelihood and simulation.

Day indices are 0-based transition indices: ``t`` refers to the state s(t)
that drives s(t+1), for t = 0..T-2.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from src.lib.errors import ValidationError
from src.lib.random_streams import generator
from src.models.kinetic_ising import KineticIsingModel, PenaltyConfig
from src.models.spin_panel import SpinPanel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KineticGradients:
    """Gradients with respect to gamma (N x M), a (N) and J (N x N, zero diagonal)."""

    gamma: np.ndarray
    a: np.ndarray
    J: np.ndarray

    def max_abs(self) -> float:
        return float(
            max(np.max(np.abs(self.gamma)), np.max(np.abs(self.a)), np.max(np.abs(self.J)))
        )


def log2cosh(theta: np.ndarray) -> np.ndarray:
    """log(2 cosh x) evaluated as |x| + log1p(exp(-2|x|)), stable for large |x|."""
    x = np.abs(theta)
    return x + np.log1p(np.exp(-2.0 * x))


def basis_value(m: int, t: int, n_basis: int, t_len: int) -> float:
    """
    Hat basis function ``m`` at transition ``t`` (both 0-based).

    phi_m(t) = max(1 - |tau(t) - c_m| / delta, 0) with tau(t) = t / (T - 2),
    c_m = m / (M - 1) and delta = 1 / (M - 1).
    """
    if not (0 <= m < n_basis and 0 <= t <= t_len - 2):
        raise ValidationError(f"Basis index out of range: m={m}, t={t} for M={n_basis}, T={t_len}")
    tau = t / (t_len - 2)
    center = m / (n_basis - 1)
    width = 1.0 / (n_basis - 1)
    return max(1.0 - abs(tau - center) / width, 0.0)


def external_field(model: KineticIsingModel, i: int, t: int) -> float:
    """h_i(t) = sum_m phi_m(t) gamma_im."""
    return float(model.basis.values[t] @ model.gamma[i])


def effective_field(model: KineticIsingModel, s_t: np.ndarray, t: int) -> np.ndarray:
    """theta_i(t) = h_i(t) + a_i s_i(t) + sum_{j != i} J_ij s_j(t)."""
    s = np.asarray(s_t, dtype=np.float64)
    return model.gamma @ model.basis.values[t] + model.a * s + model.J @ s


def predict_mean(model: KineticIsingModel, s_t: np.ndarray, t: int) -> np.ndarray:
    """Conditional expectation tanh(theta_i(t)) of s_i(t+1)."""
    return np.tanh(effective_field(model, s_t, t))


def transition_log_prob(
    model: KineticIsingModel, s_t: np.ndarray, s_next: np.ndarray, t: int
) -> float:
    """log P(s(t+1) | s(t)) = sum_i [s_i(t+1) theta_i(t) - log 2cosh theta_i(t)]."""
    theta = effective_field(model, s_t, t)
    nxt = np.asarray(s_next, dtype=np.float64)
    return float(np.sum(nxt * theta - log2cosh(theta)))


def transition_prob(
    model: KineticIsingModel, s_t: np.ndarray, s_next: np.ndarray, t: int
) -> float:
    """
    P(s(t+1) | s(t)) = prod_i exp(s_i(t+1) theta_i(t)) / (2 cosh theta_i(t)).

    Example:
        With N=1 and theta = 0.3, P(+1) = e^0.3 / (2 cosh 0.3) ~ 0.64566.
    """
    return float(np.exp(transition_log_prob(model, s_t, s_next, t)))


def _check_panel(model: KineticIsingModel, panel: SpinPanel) -> None:
    if panel.N != model.n:
        raise ValidationError(f"Model has {model.n} stocks, panel has {panel.N}")
    if panel.T != model.basis.t_len:
        raise ValidationError(
            f"Model basis was built for T={model.basis.t_len}, panel has T={panel.T}"
        )


def local_fields(model: KineticIsingModel, panel: SpinPanel) -> np.ndarray:
    """(T-1) x N matrix theta_i(t) for every transition of the panel."""
    _check_panel(model, panel)
    s = panel.as_float()[:-1]
    return model.basis.values @ model.gamma.T + s * model.a + s @ model.J.T


def conditional_log_likelihood(model: KineticIsingModel, panel: SpinPanel) -> float:
    """(1/(T-1)) sum_t sum_i [s_i(t+1) theta_i(t) - log 2cosh theta_i(t)]."""
    theta = local_fields(model, panel)
    nxt = panel.as_float()[1:]
    return float(np.sum(nxt * theta - log2cosh(theta)) / theta.shape[0])


def kinetic_gradients(model: KineticIsingModel, panel: SpinPanel) -> KineticGradients:
    """
    Unpenalized gradients of the conditional log-likelihood.

    With r_i(t) = s_i(t+1) - tanh theta_i(t):
    d/dgamma_im = mean_t phi_m(t) r_i(t), d/da_i = mean_t s_i(t) r_i(t),
    d/dJ_ij = mean_t s_j(t) r_i(t) for j != i.
    """
    theta = local_fields(model, panel)
    s = panel.as_float()
    cur, nxt = s[:-1], s[1:]
    residual = nxt - np.tanh(theta)
    count = theta.shape[0]

    grad_gamma = residual.T @ model.basis.values / count
    grad_a = np.mean(cur * residual, axis=0)
    grad_j = residual.T @ cur / count
    np.fill_diagonal(grad_j, 0.0)
    return KineticGradients(grad_gamma, grad_a, grad_j)


def penalty_value(model: KineticIsingModel, pen: PenaltyConfig) -> float:
    """Ridge terms plus smooth_gamma * sum_i ||D gamma_i||^2 (D = second difference)."""
    second = np.diff(model.gamma, n=2, axis=1)
    return float(
        pen.l2_gamma * np.sum(model.gamma**2)
        + pen.l2_a * np.sum(model.a**2)
        + pen.l2_j * np.sum(model.J**2)
        + pen.smooth_gamma * np.sum(second**2)
    )


def penalty_gradients(model: KineticIsingModel, pen: PenaltyConfig) -> KineticGradients:
    """Gradient of ``penalty_value`` (to be subtracted from the likelihood gradient)."""
    d = model.basis.second_difference()
    return KineticGradients(
        gamma=2.0 * pen.l2_gamma * model.gamma + 2.0 * pen.smooth_gamma * model.gamma @ d.T @ d,
        a=2.0 * pen.l2_a * model.a,
        J=2.0 * pen.l2_j * model.J,
    )


def penalized_objective(model: KineticIsingModel, panel: SpinPanel, pen: PenaltyConfig) -> float:
    """Conditional log-likelihood minus all penalty terms."""
    return conditional_log_likelihood(model, panel) - penalty_value(model, pen)


def penalized_gradients(
    model: KineticIsingModel, panel: SpinPanel, pen: PenaltyConfig
) -> KineticGradients:
    """Gradients of ``penalized_objective``."""
    grad = kinetic_gradients(model, panel)
    penalty = penalty_gradients(model, pen)
    grad_j = grad.J - penalty.J
    np.fill_diagonal(grad_j, 0.0)
    return KineticGradients(grad.gamma - penalty.gamma, grad.a - penalty.a, grad_j)


def simulate(
    model: KineticIsingModel, s_0: np.ndarray, steps: int, seed: int
) -> SpinPanel:
    """
    Run the synchronous dynamics from ``s_0`` for ``steps`` updates.

    Every site is resampled at once with P(s_i(t+1) = +1) = e^theta / (2 cosh theta).
    The field is defined on the model's time grid, so ``steps`` may not exceed
    T - 1 of the basis.

    Returns:
        SpinPanel with steps + 1 rows (s_0 first)
    """
    if steps < 1:
        raise ValidationError(f"steps must be positive, got {steps}")
    if steps > model.basis.n_transitions:
        raise ValidationError(
            f"Cannot simulate {steps} steps on a basis with {model.basis.n_transitions} transitions"
        )
    state = np.asarray(s_0, dtype=np.float64)
    if state.shape != (model.n,) or not np.all(np.abs(state) == 1):
        raise ValidationError("Initial state must be a +1/-1 vector of length N")

    rng = generator(seed, "simulate")
    trajectory = np.empty((steps + 1, model.n), dtype=np.int8)
    trajectory[0] = state
    fields = model.basis.values[:steps] @ model.gamma.T
    for t in range(steps):
        theta = fields[t] + model.a * state + model.J @ state
        state = np.where(rng.random(model.n) < expit(2.0 * theta), 1.0, -1.0)
        trajectory[t + 1] = state
    logger.debug(f"Simulated {steps} steps for N={model.n} (seed={seed})")
    return SpinPanel.from_array(trajectory, tickers=model.tickers)

