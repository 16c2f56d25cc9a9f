"""Contract tests for the price, sector and panel file formats.

These tests pin the documented input layouts (long and wide price files, the
ticker,sector metadata file) and the exact bytes of the panel.csv that ingest
writes from them.

Uses tests/fixtures/csv/prices_long.csv, wide/ and sectors.csv.

Run with: pytest -m contract tests/contract/test_price_file_contract.py
"""

from datetime import date

import numpy as np
import pytest

from src.services.panel_builder import (
    binarize,
    filter_complete,
    load_spin_panel,
    save_spin_panel,
)
from src.services.price_loader import load_prices, load_sectors

EXPECTED_SPINS = [
    [1, -1, -1],
    [-1, 1, 1],
    [1, 1, -1],
    [-1, -1, 1],
    [1, 1, 1],
]


@pytest.mark.contract
class TestLongPriceContract:
    """Contract for the long ``date,ticker,open,close`` layout."""

    @pytest.fixture
    def panel(self, csv_fixtures):
        sectors = load_sectors(csv_fixtures / "sectors.csv")
        prices = load_prices(csv_fixtures / "prices_long.csv", "long", sectors)
        return filter_complete(binarize(prices))

    def test_spins(self, panel):
        """Up days are +1; down days and unchanged prices are -1."""
        assert panel.tickers == ("AAA", "BBB", "CCC")
        assert panel.dates[0] == date(2020, 1, 2)
        assert panel.dates[-1] == date(2020, 1, 8)
        np.testing.assert_array_equal(panel.spins, EXPECTED_SPINS)

    def test_sector_abbreviations(self, panel):
        """Sector labels are stored under their canonical GICS names."""
        assert panel.sectors == ("Information Technology", "Financials", "Energy")

    def test_panel_csv_bytes(self, panel, tmp_path):
        """panel.csv has a date column, one column per ticker and LF line endings."""
        path = tmp_path / "panel.csv"

        save_spin_panel(panel, path)

        assert path.read_bytes() == (
            b"date,AAA,BBB,CCC\n"
            b"2020-01-02,1,-1,-1\n"
            b"2020-01-03,-1,1,1\n"
            b"2020-01-06,1,1,-1\n"
            b"2020-01-07,-1,-1,1\n"
            b"2020-01-08,1,1,1\n"
        )

    def test_panel_csv_reloads(self, panel, tmp_path, csv_fixtures):
        """A written panel reads back with the same spins and sectors."""
        path = tmp_path / "panel.csv"
        save_spin_panel(panel, path)

        reloaded = load_spin_panel(path, load_sectors(csv_fixtures / "sectors.csv"))

        np.testing.assert_array_equal(reloaded.spins, panel.spins)
        assert reloaded.sectors == panel.sectors


@pytest.mark.contract
class TestWidePriceContract:
    """Contract for the wide ``open.csv`` / ``close.csv`` layout."""

    def test_spins(self, csv_fixtures):
        """Open and close tables are aligned by date and ticker before binarizing."""
        prices = load_prices(csv_fixtures / "wide", "wide")
        panel = filter_complete(binarize(prices))

        assert panel.tickers == ("AAA", "BBB")
        # AAA opens and closes at 10.20 on the third day
        np.testing.assert_array_equal(panel.spins, [[1, -1], [-1, 1], [-1, 1]])

    def test_unclassified_tickers(self, csv_fixtures):
        """Without a sector file every ticker is 'unknown'."""
        prices = load_prices(csv_fixtures / "wide", "wide")

        assert set(prices.sectors) == {"unknown"}


@pytest.mark.contract
class TestSectorFileContract:
    """Contract for the ``ticker,sector`` metadata file."""

    def test_names_and_abbreviations(self, csv_fixtures):
        """GICS names and abbreviations are both accepted, in any case."""
        table = load_sectors(csv_fixtures / "sectors.csv")

        assert table.labels_for(["AAA", "BBB", "CCC", "DDD"]) == (
            "Information Technology",
            "Financials",
            "Energy",
            "Real Estate",
        )
