"""Unit tests for the Gibbs sampler."""

import numpy as np
import pytest

from src.lib.errors import ValidationError
from src.models.static_ising import GibbsConfig, StaticIsingModel
from src.services.gibbs_sampler import (
    gibbs_conditional,
    model_breadth_distribution,
    model_moments_mc,
    sample_chain,
)
from src.services.static_exact import exact_distribution, exact_moments


def state_index(samples: np.ndarray) -> np.ndarray:
    """Enumeration index of each sampled configuration (bit i set when s_i = +1)."""
    bits = (samples > 0).astype(np.int64)
    return bits @ (1 << np.arange(samples.shape[1]))


@pytest.mark.unit
class TestGibbsConditional:
    """Test suite for the single-site conditional."""

    def test_field_only(self):
        """A lone spin with field h is up with probability e^h / (e^h + e^-h)."""
        model = StaticIsingModel(np.array([0.3]), np.zeros((1, 1)))

        assert gibbs_conditional(model, np.array([1]), 0) == pytest.approx(
            np.exp(0.3) / (np.exp(0.3) + np.exp(-0.3))
        )

    def test_neighbour_coupling(self):
        """A positive coupling to an up neighbour raises the probability."""
        model = StaticIsingModel(np.zeros(2), np.array([[0.0, 1.0], [1.0, 0.0]]))

        up = gibbs_conditional(model, np.array([1, 1]), 0)
        down = gibbs_conditional(model, np.array([1, -1]), 0)

        assert up > 0.5 > down
        assert up + down == pytest.approx(1.0)


@pytest.mark.unit
class TestSampleChain:
    """Test suite for sample_chain."""

    def test_shape_and_values(self, static_model_factory):
        """Output is (n_chains * n_samples, N) of +1/-1."""
        model = static_model_factory(5, seed=1)
        cfg = GibbsConfig(n_chains=3, burn_in_sweeps=5, n_samples=20, seed=4)

        samples = sample_chain(model, cfg)

        assert samples.shape == (60, 5)
        assert set(np.unique(samples)) <= {-1, 1}

    def test_same_seed_same_samples(self, static_model_factory):
        """Identical config gives identical samples."""
        model = static_model_factory(4, seed=2)
        cfg = GibbsConfig(n_chains=2, burn_in_sweeps=10, n_samples=30, seed=9)

        np.testing.assert_array_equal(sample_chain(model, cfg), sample_chain(model, cfg))

    def test_different_seed_different_samples(self, static_model_factory):
        """Changing the seed changes the draws."""
        model = static_model_factory(4, seed=2)
        first = sample_chain(model, GibbsConfig(n_chains=2, n_samples=30, seed=1))
        second = sample_chain(model, GibbsConfig(n_chains=2, n_samples=30, seed=2))

        assert not np.array_equal(first, second)

    @pytest.mark.parametrize("scan", ["systematic", "random"])
    def test_workers_do_not_change_samples(self, static_model_factory, scan):
        """Splitting chains across threads yields the same matrix."""
        model = static_model_factory(5, seed=3)
        base = dict(n_chains=5, burn_in_sweeps=10, n_samples=40, seed=17, scan=scan)

        serial = sample_chain(model, GibbsConfig(**base, workers=1))
        parallel = sample_chain(model, GibbsConfig(**base, workers=3))

        np.testing.assert_array_equal(serial, parallel)

    def test_chain_major_layout(self, static_model_factory):
        """Chain k's rows do not depend on how many chains run."""
        model = static_model_factory(4, seed=5)
        small = sample_chain(model, GibbsConfig(n_chains=2, n_samples=25, seed=3))
        large = sample_chain(model, GibbsConfig(n_chains=4, n_samples=25, seed=3))

        np.testing.assert_array_equal(small, large[:50])

    def test_long_runs_cross_uniform_blocks(self, static_model_factory):
        """Runs longer than one block of uniforms keep the per-chain stream intact."""
        model = static_model_factory(3, seed=6)
        long_cfg = GibbsConfig(n_chains=2, burn_in_sweeps=100, n_samples=80, seed=8)
        one_chain = GibbsConfig(n_chains=1, burn_in_sweeps=100, n_samples=80, seed=8)

        np.testing.assert_array_equal(
            sample_chain(model, long_cfg)[:80], sample_chain(model, one_chain)
        )

    def test_invalid_config(self):
        """Bad scan orders and chain counts are rejected."""
        with pytest.raises(ValidationError, match="scan"):
            GibbsConfig(scan="zigzag")
        with pytest.raises(ValidationError, match="n_chains"):
            GibbsConfig(n_chains=0)


@pytest.mark.unit
class TestSamplerAccuracy:
    """Monte Carlo estimates against the exact oracle."""

    def test_moments_close_to_exact(self, static_model_factory):
        """Sample moments of a weakly coupled model are near the exact ones."""
        model = static_model_factory(4, seed=7, scale=0.3)
        cfg = GibbsConfig(n_chains=8, burn_in_sweeps=50, n_samples=1000, seed=1)

        mc = model_moments_mc(model, cfg)
        exact = exact_moments(model)

        np.testing.assert_allclose(mc.m1, exact.m1, atol=0.05)
        np.testing.assert_allclose(mc.m2, exact.m2, atol=0.05)

    def test_breadth_counts(self, static_model_factory):
        """The breadth histogram counts every sample once."""
        model = static_model_factory(4, seed=8)
        cfg = GibbsConfig(n_chains=2, n_samples=50, seed=2)

        histogram = model_breadth_distribution(model, cfg, bins=5)

        assert int(np.sum(histogram.counts)) == 100

    @pytest.mark.slow
    @pytest.mark.parametrize("scan", ["systematic", "random"])
    def test_total_variation_distance(self, static_model_factory, scan):
        """The empirical state distribution converges to the Boltzmann one."""
        model = static_model_factory(6, seed=9, scale=0.5)
        cfg = GibbsConfig(
            n_chains=16, burn_in_sweeps=200, n_samples=5000, seed=21, scan=scan, workers=4
        )

        samples = sample_chain(model, cfg)
        empirical = np.bincount(state_index(samples), minlength=64) / samples.shape[0]
        tv = 0.5 * np.abs(empirical - exact_distribution(model)).sum()

        assert tv < 0.04
