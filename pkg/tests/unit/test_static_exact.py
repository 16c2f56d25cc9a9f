"""Unit tests for the exact enumeration oracle."""

import itertools

import numpy as np
import pytest

from src.lib.errors import OracleSizeError, ValidationError
from src.models.moments import MomentSet
from src.models.static_ising import StaticIsingModel
from src.services.static_exact import (
    all_states,
    average_log_likelihood,
    energy,
    exact_distribution,
    exact_moments,
    exact_partition,
    log_partition,
)


def naive_moments(model: StaticIsingModel) -> tuple[float, np.ndarray, np.ndarray]:
    """Z, <s_i> and <s_i s_j> by looping over itertools.product."""
    n = model.n
    z = 0.0
    m1 = np.zeros(n)
    m2 = np.zeros((n, n))
    for config in itertools.product((-1.0, 1.0), repeat=n):
        s = np.array(config)
        w = np.exp(-energy(model, s))
        z += w
        m1 += w * s
        m2 += w * np.outer(s, s)
    return z, m1 / z, m2 / z


@pytest.mark.unit
class TestPartition:
    """Test suite for the partition function."""

    def test_independent_spins(self):
        """With J = 0, Z factorizes into prod 2 cosh(h_i)."""
        h = np.array([0.2, -0.7, 1.1])
        model = StaticIsingModel(h, np.zeros((3, 3)))

        assert exact_partition(model) == pytest.approx(np.prod(2 * np.cosh(h)), rel=1e-12)

    def test_two_spin_closed_form(self):
        """Z = 2e^J + 2e^-J for two coupled spins without fields."""
        model = StaticIsingModel(np.zeros(2), np.array([[0.0, 0.4], [0.4, 0.0]]))

        assert exact_partition(model) == pytest.approx(2 * np.exp(0.4) + 2 * np.exp(-0.4))

    def test_matches_naive_sum(self, static_model_factory):
        """log Z equals the log of a direct sum over states."""
        model = static_model_factory(6, seed=1)
        z, _, _ = naive_moments(model)

        assert log_partition(model) == pytest.approx(np.log(z), rel=1e-12)

    def test_large_parameters_stay_finite(self):
        """log Z is finite when Z itself would overflow."""
        model = StaticIsingModel(np.full(4, 300.0), np.zeros((4, 4)))

        assert np.isfinite(log_partition(model))
        assert log_partition(model) == pytest.approx(1200.0, rel=1e-9)

    def test_oracle_size_limit(self):
        """More than 20 spins is refused."""
        model = StaticIsingModel.zeros(21)

        with pytest.raises(OracleSizeError, match="2\\^21"):
            log_partition(model)
        with pytest.raises(OracleSizeError):
            all_states(21)


@pytest.mark.unit
class TestExactMoments:
    """Test suite for exact moments and probabilities."""

    def test_matches_naive_moments(self, static_model_factory):
        """Vectorized moments agree with brute force."""
        model = static_model_factory(5, seed=2, scale=0.8)
        _, m1, m2 = naive_moments(model)

        moments = exact_moments(model)

        np.testing.assert_allclose(moments.m1, m1, atol=1e-12)
        np.testing.assert_allclose(moments.m2, m2, atol=1e-12)

    def test_distribution_sums_to_one(self, static_model_factory):
        """Probabilities of all states sum to one."""
        probs = exact_distribution(static_model_factory(7, seed=3))

        assert probs.shape == (128,)
        assert probs.sum() == pytest.approx(1.0, abs=1e-12)

    def test_state_order(self):
        """State k sets spin i to +1 when bit i of k is set."""
        states = all_states(2)

        np.testing.assert_array_equal(states, [[-1, -1], [1, -1], [-1, 1], [1, 1]])

    def test_field_reversal_mirrors_distribution(self, static_model_factory):
        """h -> -h maps P(s) to P(-s), flips <s_i> and keeps <s_i s_j>."""
        model = static_model_factory(5, seed=8, scale=0.6)
        flipped = StaticIsingModel(-model.h, model.J)

        # state index k and its complement 2^N - 1 - k are spin-reversed
        np.testing.assert_allclose(
            exact_distribution(flipped), exact_distribution(model)[::-1], rtol=1e-12
        )
        original, reversed_ = exact_moments(model), exact_moments(flipped)
        np.testing.assert_allclose(reversed_.m1, -original.m1, atol=1e-12)
        np.testing.assert_allclose(reversed_.m2, original.m2, atol=1e-12)

    def test_independent_means(self):
        """With J = 0 each mean is tanh(h_i)."""
        h = np.array([0.5, -0.25])

        moments = exact_moments(StaticIsingModel(h, np.zeros((2, 2))))

        np.testing.assert_allclose(moments.m1, np.tanh(h), atol=1e-12)
        assert moments.m2[0, 1] == pytest.approx(np.tanh(0.5) * np.tanh(-0.25))


@pytest.mark.unit
class TestLikelihood:
    """Test suite for the average log-likelihood."""

    def test_gradient_is_moment_difference(self, static_model_factory):
        """d/dh_i of the likelihood equals m1_i(target) - m1_i(model)."""
        model = static_model_factory(4, seed=4)
        target = MomentSet.from_samples(all_states(4)[[0, 3, 5, 6, 9, 15]])
        eps = 1e-6

        h_plus = model.h.copy()
        h_plus[1] += eps
        h_minus = model.h.copy()
        h_minus[1] -= eps
        numeric = (
            average_log_likelihood(StaticIsingModel(h_plus, model.J), target)
            - average_log_likelihood(StaticIsingModel(h_minus, model.J), target)
        ) / (2 * eps)

        expected = target.m1[1] - exact_moments(model).m1[1]
        assert numeric == pytest.approx(expected, abs=1e-6)

    def test_independent_model_likelihood(self):
        """For J = 0 and h = 0 every state has probability 2^-N."""
        target = MomentSet.from_samples(np.array([[1, -1, 1]]))

        assert average_log_likelihood(StaticIsingModel.zeros(3), target) == pytest.approx(
            -3 * np.log(2)
        )


@pytest.mark.unit
class TestStaticModel:
    """Test suite for StaticIsingModel construction."""

    def test_rejects_asymmetric(self):
        """Couplings must be symmetric."""
        with pytest.raises(ValidationError, match="symmetric"):
            StaticIsingModel(np.zeros(2), np.array([[0.0, 0.1], [0.2, 0.0]]))

    def test_rejects_diagonal(self):
        """Self-couplings are not allowed."""
        with pytest.raises(ValidationError, match="zero diagonal"):
            StaticIsingModel(np.zeros(2), np.eye(2))

    def test_upper_triangle_round_trip(self):
        """from_upper and upper_triangle use the same row-major order."""
        model = StaticIsingModel.from_upper([0.1, 0.2, 0.3], [1.0, 2.0, 3.0])

        assert model.J[0, 2] == 2.0
        assert model.J[2, 1] == 3.0
        np.testing.assert_array_equal(model.upper_triangle(), [1.0, 2.0, 3.0])

    def test_energy_example(self):
        """Aligned coupled spins lower the energy by J."""
        model = StaticIsingModel(np.zeros(2), np.array([[0.0, 0.5], [0.5, 0.0]]))

        assert energy(model, np.array([1, 1])) == pytest.approx(-0.5)
        assert energy(model, np.array([1, -1])) == pytest.approx(0.5)
