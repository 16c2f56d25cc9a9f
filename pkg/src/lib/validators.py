"""
Input validation utilities.

Checks shared by the run configuration and the command-line flags: seeds,
worker counts, fractions, percentiles, date windows and ticker symbols.
"""

import re
from datetime import date

from src.lib.config import FULL_SAMPLE_WINDOW
from src.lib.errors import ValidationError

MAX_SEED = 2**64 - 1

_TICKER_PATTERN = re.compile(r"^[A-Z0-9][A-Z0-9.\-]{0,14}$")


def validate_ticker(ticker: str) -> str:
    """
    Validate and normalize a ticker symbol.

    Args:
        ticker: Stock ticker symbol

    Returns:
        Normalized ticker symbol (uppercase, trimmed)

    Raises:
        ValidationError: If ticker format is invalid

    Examples:
        >>> validate_ticker(" brk.b ")
        'BRK.B'
        >>> validate_ticker("")
        Traceback (most recent call last):
        ...
        ValidationError: Invalid ticker format: ''
    """
    normalized = ticker.upper().strip()
    if not _TICKER_PATTERN.match(normalized):
        raise ValidationError(
            f"Invalid ticker format: {ticker!r}. "
            "Tickers are 1-15 letters, digits, dots or dashes (e.g. AAPL, BRK.B, BF-B)"
        )
    return normalized


def validate_seed(seed: int) -> int:
    """
    Validate a master seed (unsigned 64-bit).

    Raises:
        ValidationError: Seed is negative or too large
    """
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ValidationError(f"Seed must be an integer, got {seed!r}")
    if not 0 <= seed <= MAX_SEED:
        raise ValidationError(f"Seed must be in [0, 2^64 - 1], got {seed}")
    return seed


def validate_workers(workers: int) -> int:
    """Worker counts must be positive."""
    if workers < 1:
        raise ValidationError(f"Worker count must be at least 1, got {workers}")
    return workers


def validate_fraction(value: float, name: str, allow_zero: bool = False) -> float:
    """
    Validate a fraction in (0, 1], or [0, 1] with ``allow_zero``.

    Examples:
        >>> validate_fraction(0.1, "filter_fraction")
        0.1
    """
    lower_ok = value >= 0 if allow_zero else value > 0
    if not (lower_ok and value <= 1):
        interval = "[0, 1]" if allow_zero else "(0, 1]"
        raise ValidationError(f"{name} must be in {interval}, got {value}")
    return float(value)


def validate_percentile(value: float, name: str) -> float:
    if not 0 <= value <= 100:
        raise ValidationError(f"{name} must be a percentile in [0, 100], got {value}")
    return float(value)


def validate_window(name: str, start: date, end: date) -> tuple[date, date]:
    """
    Validate a named inclusive date window.

    Raises:
        ValidationError: Empty or reserved name, or start after end
    """
    if not name.strip():
        raise ValidationError("Window names must not be empty")
    if name.strip().casefold() == FULL_SAMPLE_WINDOW.casefold():
        raise ValidationError(
            f"Window name '{FULL_SAMPLE_WINDOW}' is reserved for the whole panel"
        )
    if start > end:
        raise ValidationError(f"Window '{name}' starts after it ends ({start} > {end})")
    return start, end
