"""Sector classification table."""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from src.lib.config import GICS_SECTORS, UNKNOWN_SECTOR
from src.lib.errors import ValidationError

_ABBREVIATION_TO_NAME = {abbr.lower(): name for name, abbr in GICS_SECTORS.items()}
_NAME_LOOKUP = {name.lower(): name for name in GICS_SECTORS}


@dataclass(frozen=True)
class SectorTable:
    """Ticker -> GICS sector mapping.

    Labels are always canonical sector names (e.g. "Real Estate"), never
    abbreviations; tickers without an entry map to ``"unknown"``.
    """

    mapping: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        canonical = {ticker: self.resolve(label) for ticker, label in self.mapping.items()}
        object.__setattr__(self, "mapping", canonical)

    @staticmethod
    def resolve(label: str) -> str:
        """
        Resolve a sector name or abbreviation to its canonical name.

        Args:
            label: Sector name or Table-style abbreviation, case-insensitive

        Returns:
            Canonical sector name, or "unknown"

        Raises:
            ValidationError: If the label is neither a known sector nor "unknown"

        Examples:
            >>> SectorTable.resolve("re")
            'Real Estate'
            >>> SectorTable.resolve("Health Care")
            'Health Care'
        """
        key = label.strip().lower()
        if key in ("", UNKNOWN_SECTOR):
            return UNKNOWN_SECTOR
        if key in _NAME_LOOKUP:
            return _NAME_LOOKUP[key]
        if key in _ABBREVIATION_TO_NAME:
            return _ABBREVIATION_TO_NAME[key]
        raise ValidationError(f"Unknown sector label: {label!r}")

    @staticmethod
    def abbreviation(label: str) -> str:
        """Short label for charts; "unknown" stays as is."""
        name = SectorTable.resolve(label)
        return GICS_SECTORS.get(name, UNKNOWN_SECTOR)

    def sector_of(self, ticker: str) -> str:
        """Sector of a ticker, "unknown" when absent."""
        return self.mapping.get(ticker, UNKNOWN_SECTOR)

    def labels_for(self, tickers: Iterable[str]) -> tuple[str, ...]:
        """Sector labels aligned with the given ticker order."""
        return tuple(self.sector_of(t) for t in tickers)
