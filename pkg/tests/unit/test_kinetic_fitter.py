"""Unit tests for the kinetic model fit."""

import numpy as np
import pytest

from src.lib.errors import ConfigurationError, DivergenceError, ValidationError
from src.models.kinetic_ising import HatBasis, KineticFitConfig, PenaltyConfig
from src.models.spin_panel import SpinPanel
from src.services.kinetic_dynamics import penalized_gradients, simulate
from src.services.kinetic_fitter import (
    check_panel_length,
    fit_kinetic,
    fit_kinetic_stock,
    per_stock_trace_frame,
)

TIGHT = dict(tolerance=1e-7, max_iterations=100)


@pytest.fixture
def long_simulation(kinetic_model_factory):
    """A known N=4, M=3 model and a 20000-day trajectory from it."""
    truth = kinetic_model_factory(4, 3, 20000, seed=31, scale=0.3)
    panel = simulate(truth, np.array([1.0, 1.0, -1.0, -1.0]), 19999, seed=2)
    return truth, panel


@pytest.mark.unit
class TestCheckPanelLength:
    """Test suite for check_panel_length."""

    def test_minimum_length(self):
        """T = M + 2 is the shortest usable panel."""
        check_panel_length(12, 10)

    def test_too_short(self):
        """M > T - 2 is a configuration error."""
        with pytest.raises(ConfigurationError, match="T >= 12"):
            check_panel_length(11, 10)

    def test_fit_rejects_short_panel(self, kinetic_panel):
        """fit_kinetic checks the length before fitting anything."""
        with pytest.raises(ConfigurationError):
            fit_kinetic(kinetic_panel, KineticFitConfig(n_basis=599))

    def test_fit_rejects_single_stock(self):
        """At least two stocks are needed."""
        panel = SpinPanel.from_array(np.where(np.arange(20) % 3 == 0, 1, -1)[:, None])

        with pytest.raises(ValidationError, match="at least 2 stocks"):
            fit_kinetic(panel, KineticFitConfig(n_basis=3))


@pytest.mark.unit
class TestFitKinetic:
    """Test suite for fit_kinetic."""

    def test_recovers_parameters(self, long_simulation):
        """Fitting a long simulated trajectory recovers the generating model."""
        truth, panel = long_simulation

        model, traces = fit_kinetic(panel, KineticFitConfig(n_basis=3, **TIGHT))

        assert all(t.converged for t in traces)
        np.testing.assert_allclose(model.J, truth.J, atol=0.05)
        np.testing.assert_allclose(model.a, truth.a, atol=0.05)
        np.testing.assert_allclose(model.gamma, truth.gamma, atol=0.15)

    def test_stationary_point(self, kinetic_panel):
        """At convergence the full penalized gradient vanishes."""
        penalties = PenaltyConfig(l2_gamma=0.01, l2_a=0.01, l2_j=0.01, smooth_gamma=0.1)
        cfg = KineticFitConfig(n_basis=3, penalties=penalties, **TIGHT)

        model, _ = fit_kinetic(kinetic_panel, cfg)

        assert penalized_gradients(model, kinetic_panel, penalties).max_abs() < 1e-6

    def test_workers_do_not_change_result(self, kinetic_panel):
        """Fitting stocks on several threads gives identical parameters."""
        serial, _ = fit_kinetic(kinetic_panel, KineticFitConfig(n_basis=3, workers=1))
        parallel, _ = fit_kinetic(kinetic_panel, KineticFitConfig(n_basis=3, workers=3))

        np.testing.assert_array_equal(serial.gamma, parallel.gamma)
        np.testing.assert_array_equal(serial.a, parallel.a)
        np.testing.assert_array_equal(serial.J, parallel.J)

    def test_gradient_direction_agrees_with_newton(self, kinetic_panel):
        """Plain gradient ascent reaches the same optimum as Newton."""
        newton, _ = fit_kinetic(kinetic_panel, KineticFitConfig(n_basis=3, **TIGHT))
        gradient, traces = fit_kinetic(
            kinetic_panel,
            KineticFitConfig(
                n_basis=3, direction="gradient", tolerance=1e-6, max_iterations=20000
            ),
        )

        assert all(t.converged for t in traces)
        np.testing.assert_allclose(gradient.J, newton.J, atol=1e-3)
        np.testing.assert_allclose(gradient.gamma, newton.gamma, atol=1e-3)

    def test_model_labels(self, kinetic_panel):
        """The fitted model carries the panel's tickers, a zero diagonal and its basis."""
        model, _ = fit_kinetic(kinetic_panel, KineticFitConfig(n_basis=4))

        assert model.tickers == kinetic_panel.tickers
        assert np.all(np.diag(model.J) == 0)
        assert model.basis.n_basis == 4
        assert model.basis.t_len == kinetic_panel.T

    def test_iteration_cap(self, kinetic_panel):
        """Stopping at max_iterations is reported as not converged."""
        _, traces = fit_kinetic(
            kinetic_panel, KineticFitConfig(n_basis=3, max_iterations=1, tolerance=1e-12)
        )

        assert not any(t.converged for t in traces)
        assert all(t.iterations == 1 for t in traces)


@pytest.mark.unit
class TestFitKineticStock:
    """Test suite for a single stock's block."""

    def test_block_matches_full_fit(self, kinetic_panel):
        """Stock i's block equals row i of the full fit."""
        cfg = KineticFitConfig(n_basis=3)
        model, _ = fit_kinetic(kinetic_panel, cfg)

        block = fit_kinetic_stock(kinetic_panel, 2, HatBasis(3, kinetic_panel.T), cfg)

        np.testing.assert_array_equal(block.gamma, model.gamma[2])
        assert block.a == model.a[2]
        np.testing.assert_array_equal(block.couplings, model.J[2])
        assert block.couplings[2] == 0.0

    @pytest.mark.parametrize("direction", ["newton", "gradient"])
    def test_non_finite_step_diverges(self, kinetic_panel, direction):
        """A step that leaves the finite parameters raises instead of stalling."""
        cfg = KineticFitConfig(n_basis=3, step_size=float("inf"), direction=direction)

        with pytest.raises(DivergenceError, match=kinetic_panel.tickers[0]):
            fit_kinetic_stock(kinetic_panel, 0, HatBasis(3, kinetic_panel.T), cfg)

    def test_trace_frame(self, kinetic_panel):
        """The per-stock table has one row per ticker."""
        _, traces = fit_kinetic(kinetic_panel, KineticFitConfig(n_basis=3))

        frame = per_stock_trace_frame(traces)

        assert list(frame.columns) == [
            "ticker",
            "iterations",
            "converged",
            "objective",
            "gradient_max_abs",
        ]
        assert frame["ticker"].tolist() == list(kinetic_panel.tickers)
        assert frame["converged"].all()
