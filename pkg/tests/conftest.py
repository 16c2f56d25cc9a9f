"""Pytest configuration and fixtures for all tests."""

import logging
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from src.models.kinetic_ising import HatBasis, KineticIsingModel
from src.models.spin_panel import SpinPanel
from src.models.static_ising import StaticIsingModel
from src.services.kinetic_dynamics import simulate

FIXTURES = Path(__file__).parent / "fixtures"

SECTOR_CYCLE = ("Information Technology", "Financials", "Energy")


def random_static_model(n: int, seed: int, scale: float = 0.5) -> StaticIsingModel:
    """Model with h and J drawn uniformly from [-scale, scale]."""
    rng = np.random.default_rng(seed)
    h = rng.uniform(-scale, scale, n)
    upper = rng.uniform(-scale, scale, n * (n - 1) // 2)
    return StaticIsingModel.from_upper(h, upper)


def random_kinetic_model(
    n: int, n_basis: int, t_len: int, seed: int, scale: float = 0.3
) -> KineticIsingModel:
    """Kinetic model with every parameter drawn uniformly from [-scale, scale]."""
    rng = np.random.default_rng(seed)
    couplings = rng.uniform(-scale, scale, (n, n))
    np.fill_diagonal(couplings, 0.0)
    return KineticIsingModel(
        gamma=rng.uniform(-scale, scale, (n, n_basis)),
        a=rng.uniform(-scale, scale, n),
        J=couplings,
        basis=HatBasis(n_basis, t_len),
    )


def sectors_for(n: int) -> tuple[str, ...]:
    return tuple(SECTOR_CYCLE[k % len(SECTOR_CYCLE)] for k in range(n))


def write_long_prices(panel: SpinPanel, path: Path) -> Path:
    """Long price file whose binarization reproduces ``panel`` exactly."""
    rows = []
    for t, day in enumerate(panel.dates):
        for k, ticker in enumerate(panel.tickers):
            close = 101.0 if panel.spins[t, k] > 0 else 99.0
            rows.append((day.isoformat(), ticker, 100.0, close))
    frame = pd.DataFrame(rows, columns=["date", "ticker", "open", "close"])
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def write_sectors(panel: SpinPanel, path: Path) -> Path:
    frame = pd.DataFrame({"ticker": list(panel.tickers), "sector": list(panel.sectors)})
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


@pytest.fixture
def csv_fixtures():
    """Directory holding the hand-written CSV fixtures."""
    return FIXTURES / "csv"


@pytest.fixture
def static_model_factory():
    """Factory for random static models: ``factory(n, seed, scale=0.5)``."""
    return random_static_model


@pytest.fixture
def kinetic_model_factory():
    """Factory for random kinetic models: ``factory(n, n_basis, t_len, seed)``."""
    return random_kinetic_model


@pytest.fixture
def random_panel():
    """Independent fair coin flips, T=400, N=6, three sectors."""
    rng = np.random.default_rng(11)
    spins = np.where(rng.random((400, 6)) < 0.5, 1, -1)
    tickers = tuple(f"T{k}" for k in range(6))
    return SpinPanel.from_array(spins, tickers=tickers, sectors=sectors_for(6))


@pytest.fixture
def kinetic_panel():
    """Panel simulated from a known N=4, M=3 kinetic model (T=600)."""
    model = random_kinetic_model(4, 3, 600, seed=5)
    panel = simulate(model, np.array([1.0, -1.0, 1.0, -1.0]), 599, seed=3)
    return SpinPanel(panel.dates, ("AAA", "BBB", "CCC", "DDD"), sectors_for(4), panel.spins)


@pytest.fixture
def pipeline_inputs(tmp_path):
    """
    Price and sector files for a small end-to-end run, plus a run config.

    N=6 stocks simulated from a kinetic model over T=300 days; the config uses
    exact static fitting and few benchmark realizations so a full run is fast.
    """
    model = random_kinetic_model(6, 4, 300, seed=21, scale=0.25)
    simulated = simulate(model, np.ones(6), 299, seed=8)
    tickers = ("AAA", "BBB", "CCC", "DDD", "EEE", "FFF")
    panel = SpinPanel(simulated.dates, tickers, sectors_for(6), simulated.spins)

    data = tmp_path / "data"
    data.mkdir()
    write_long_prices(panel, data / "prices.csv")
    write_sectors(panel, data / "sectors.csv")

    config = tmp_path / "run.toml"
    config.write_text(
        "\n".join(
            [
                "seed = 7",
                "workers = 1",
                "",
                "[input]",
                'prices = "data/prices.csv"',
                'sectors = "data/sectors.csv"',
                "",
                "[output]",
                'dir = "out"',
                "",
                "[static_fit]",
                "exact = true",
                "max_iterations = 2000",
                "step_size = 0.2",
                "tolerance = 1e-3",
                "",
                "[static_fit.gibbs]",
                "n_chains = 4",
                "burn_in_sweeps = 20",
                "n_samples = 100",
                "",
                "[kinetic_fit]",
                "n_basis = 4",
                "",
                "[analysis]",
                "filter_fraction = 0.4",
                "random_graph_realizations = 5",
                "watts_strogatz_realizations = 5",
                "calibration_bins = 10",
                "",
                "[windows]",
                f"\"First half\" = [{panel.dates[0].isoformat()}, {panel.dates[149].isoformat()}]",
                "",
            ]
        ),
        encoding="utf-8",
    )
    return {"config": config, "panel": panel, "out": tmp_path / "out", "root": tmp_path}


@pytest.fixture(autouse=True)
def reset_logging_handlers():
    """Detach file handlers added by CLI runs so each test starts clean."""
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if isinstance(handler, logging.FileHandler):
            root.removeHandler(handler)
            handler.close()
