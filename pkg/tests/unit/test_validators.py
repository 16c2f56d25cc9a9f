"""Unit tests for input validators."""

from datetime import date

import pytest

from src.lib.errors import ValidationError
from src.lib.validators import (
    MAX_SEED,
    validate_fraction,
    validate_percentile,
    validate_seed,
    validate_ticker,
    validate_window,
    validate_workers,
)


@pytest.mark.unit
class TestValidateTicker:
    """Test suite for validate_ticker."""

    def test_validate_ticker_uppercase(self):
        """Ticker is converted to uppercase."""
        assert validate_ticker("aapl") == "AAPL"
        assert validate_ticker("msft") == "MSFT"

    def test_validate_ticker_strips_whitespace(self):
        """Leading/trailing whitespace is removed."""
        assert validate_ticker("  AAPL  ") == "AAPL"
        assert validate_ticker("\tGOOGL\n") == "GOOGL"

    def test_validate_ticker_valid_formats(self):
        """Share classes and numeric exchange codes are accepted."""
        assert validate_ticker("A") == "A"
        assert validate_ticker("BRK.B") == "BRK.B"
        assert validate_ticker("BF-B") == "BF-B"
        assert validate_ticker("7203") == "7203"

    def test_validate_ticker_invalid_too_long(self):
        """Ticker longer than 15 characters is rejected."""
        with pytest.raises(ValidationError, match="Invalid ticker format"):
            validate_ticker("TOOLONGTICKERXYZ1")

    def test_validate_ticker_invalid_special_chars(self):
        """Characters other than letters, digits, dots and dashes are rejected."""
        with pytest.raises(ValidationError, match="Invalid ticker format"):
            validate_ticker("AAPL@")
        with pytest.raises(ValidationError, match="Invalid ticker format"):
            validate_ticker("AA_PL")
        with pytest.raises(ValidationError, match="Invalid ticker format"):
            validate_ticker(".AA")

    def test_validate_ticker_empty(self):
        """Empty ticker is rejected."""
        with pytest.raises(ValidationError, match="Invalid ticker format"):
            validate_ticker("")
        with pytest.raises(ValidationError, match="Invalid ticker format"):
            validate_ticker("   ")


@pytest.mark.unit
class TestValidateSeed:
    """Test suite for validate_seed."""

    def test_bounds_accepted(self):
        """0 and 2^64 - 1 are valid seeds."""
        assert validate_seed(0) == 0
        assert validate_seed(MAX_SEED) == MAX_SEED

    def test_negative_rejected(self):
        """Negative seeds are rejected."""
        with pytest.raises(ValidationError, match="Seed must be in"):
            validate_seed(-1)

    def test_too_large_rejected(self):
        """Seeds beyond 64 bits are rejected."""
        with pytest.raises(ValidationError, match="Seed must be in"):
            validate_seed(2**64)

    def test_non_integer_rejected(self):
        """Booleans and floats are not seeds."""
        with pytest.raises(ValidationError, match="integer"):
            validate_seed(True)
        with pytest.raises(ValidationError, match="integer"):
            validate_seed(1.5)


@pytest.mark.unit
class TestValidateNumbers:
    """Test suite for worker, fraction and percentile checks."""

    def test_workers(self):
        """Worker count must be at least one."""
        assert validate_workers(4) == 4
        with pytest.raises(ValidationError, match="at least 1"):
            validate_workers(0)

    def test_fraction_open_interval(self):
        """Fractions default to (0, 1]."""
        assert validate_fraction(1, "filter_fraction") == 1.0
        with pytest.raises(ValidationError, match=r"filter_fraction must be in \(0, 1\]"):
            validate_fraction(0, "filter_fraction")
        with pytest.raises(ValidationError):
            validate_fraction(1.01, "filter_fraction")

    def test_fraction_allow_zero(self):
        """allow_zero widens the interval to [0, 1]."""
        assert validate_fraction(0, "backbone", allow_zero=True) == 0.0

    def test_percentile(self):
        """Percentiles must lie in [0, 100]."""
        assert validate_percentile(30, "edge") == 30.0
        with pytest.raises(ValidationError, match="percentile"):
            validate_percentile(101, "edge")


@pytest.mark.unit
class TestValidateWindow:
    """Test suite for validate_window."""

    def test_valid_window(self):
        """A window whose start precedes its end is returned unchanged."""
        start, end = date(2007, 10, 1), date(2008, 10, 1)
        assert validate_window("GFC", start, end) == (start, end)

    def test_single_day_window(self):
        """start == end is allowed (inclusive range)."""
        day = date(2020, 3, 16)
        assert validate_window("Crash day", day, day) == (day, day)

    def test_reversed_window(self):
        """start after end is rejected with the window name."""
        with pytest.raises(ValidationError, match="'COVID' starts after it ends"):
            validate_window("COVID", date(2021, 1, 1), date(2020, 1, 1))

    def test_empty_name(self):
        """Blank names are rejected."""
        with pytest.raises(ValidationError, match="must not be empty"):
            validate_window("  ", date(2020, 1, 1), date(2020, 2, 1))

    def test_reserved_name(self):
        """The full-sample row name is reserved, whatever its case."""
        with pytest.raises(ValidationError, match="reserved"):
            validate_window("FULL SAMPLE ", date(2020, 1, 1), date(2020, 2, 1))
