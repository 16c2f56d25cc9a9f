"""Pydantic models for CSV rows and JSON artifact documents.

Sector metadata rows are validated row by row; model documents are validated
as a whole when read back from disk.
"""

from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.lib.config import SCHEMA_VERSION
from src.lib.errors import MarketIsingError
from src.models.sectors import SectorTable


class SectorCSVRow(BaseModel):
    """One row of the ``ticker,sector`` metadata file."""

    model_config = ConfigDict(str_strip_whitespace=True)

    ticker: str = Field(min_length=1)
    sector: str = ""

    @field_validator("ticker")
    @classmethod
    def normalize_ticker(cls, v: str) -> str:
        return v.upper()

    @field_validator("sector")
    @classmethod
    def canonical_sector(cls, v: str) -> str:
        """Accept GICS names or abbreviations in any case."""
        try:
            return SectorTable.resolve(v)
        except MarketIsingError as e:
            raise ValueError(e.message) from e


class StaticModelDocument(BaseModel):
    """On-disk form of a static Ising model.

    ``j`` is the row-major strict upper triangle, so symmetry holds by format.
    """

    model_config = ConfigDict(extra="forbid")

    schema_version: int = SCHEMA_VERSION
    n: int = Field(ge=1)
    tickers: list[str]
    h: list[float]
    j: list[float]
    fit_meta: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_sizes(self) -> "StaticModelDocument":
        if self.schema_version != SCHEMA_VERSION:
            raise ValueError(
                f"Unsupported schema_version {self.schema_version} (expected {SCHEMA_VERSION})"
            )
        if len(self.tickers) != self.n or len(self.h) != self.n:
            raise ValueError(f"tickers and h must have length n={self.n}")
        expected = self.n * (self.n - 1) // 2
        if len(self.j) != expected:
            raise ValueError(f"j must hold {expected} upper-triangle values, got {len(self.j)}")
        return self


class KineticModelDocument(BaseModel):
    """On-disk form of a kinetic Ising model (gamma and j row-major)."""

    model_config = ConfigDict(extra="forbid")

    schema_version: int = SCHEMA_VERSION
    n: int = Field(ge=1)
    m_basis: int = Field(ge=2)
    t_len: int = Field(ge=3)
    tickers: list[str]
    gamma: list[float]
    a: list[float]
    j: list[float]
    penalties: dict[str, float]
    fit_meta: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_sizes(self) -> "KineticModelDocument":
        if self.schema_version != SCHEMA_VERSION:
            raise ValueError(
                f"Unsupported schema_version {self.schema_version} (expected {SCHEMA_VERSION})"
            )
        if len(self.tickers) != self.n or len(self.a) != self.n:
            raise ValueError(f"tickers and a must have length n={self.n}")
        if len(self.gamma) != self.n * self.m_basis:
            raise ValueError(f"gamma must hold n*m_basis={self.n * self.m_basis} values")
        if len(self.j) != self.n * self.n:
            raise ValueError(f"j must hold n*n={self.n * self.n} values")
        diagonal = self.j[:: self.n + 1]
        if any(v != 0 for v in diagonal):
            raise ValueError("j diagonal must be stored as 0")
        return self


class SummaryDocument(BaseModel):
    """``summary.json``: one section per diagnostics table, rows keyed by label."""

    schema_version: int = SCHEMA_VERSION
    sections: dict[str, dict[str, Any]]
