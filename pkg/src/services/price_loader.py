"""Price and sector file ingestion.

Two price layouts are supported:

- long: one CSV with header ``date,ticker,open,close``
- wide: ``open.csv`` and ``close.csv`` side by side, first column ``date``,
  remaining columns tickers

Empty or unparseable price cells become missing; so do non-positive prices.
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import ValidationError as PydanticValidationError

from src.lib.csv_models import SectorCSVRow
from src.lib.errors import DuplicateRecordError, SchemaError, ValidationError
from src.lib.validators import validate_ticker
from src.models.price_panel import PricePanel
from src.models.sectors import SectorTable

logger = logging.getLogger(__name__)

PRICE_FORMATS = ("long", "wide")
LONG_COLUMNS = ("date", "ticker", "open", "close")
SECTOR_COLUMNS = ("ticker", "sector")
DATE_FORMAT = "%Y-%m-%d"


def read_raw_csv(path: Path) -> pd.DataFrame:
    """Read every cell as a string; row 0 is the header (file line 1)."""
    if not path.is_file():
        raise SchemaError(path, "file does not exist")
    try:
        raw = pd.read_csv(
            path, header=None, dtype=str, keep_default_na=False, na_filter=False, encoding="utf-8"
        )
    except pd.errors.EmptyDataError:
        raise SchemaError(path, "file is empty", line=1)
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise SchemaError(path, f"not a readable CSV file ({e})")
    return raw.fillna("")


def _header(raw: pd.DataFrame, path: Path) -> list[str]:
    header = [str(c).strip().lower() for c in raw.iloc[0].tolist()]
    if len(set(header)) != len(header):
        raise SchemaError(path, f"duplicate column names in header {header}", line=1)
    if any(h == "" for h in header):
        raise SchemaError(path, "empty column name in header", line=1)
    return header


def parse_iso_dates(values: pd.Series, path: Path) -> pd.Series:
    """Parse ISO dates; the first unparseable value raises with its line number."""
    parsed = pd.to_datetime(values.str.strip(), format=DATE_FORMAT, errors="coerce")
    bad = parsed.isna()
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise SchemaError(
            path, f"unparseable date {values.iloc[row]!r} (expected YYYY-MM-DD)", line=row + 2
        )
    return parsed.dt.date


def _parse_prices(values: pd.Series | pd.DataFrame) -> tuple[np.ndarray, int, int]:
    """Numeric prices with blanks/garbage/non-positive values as NaN.

    Returns:
        (prices, unparseable count, non-positive count)
    """
    frame = values.to_frame() if isinstance(values, pd.Series) else values
    stripped = frame.apply(lambda col: col.str.strip())
    numeric = stripped.apply(pd.to_numeric, errors="coerce").to_numpy(dtype=np.float64)
    unparseable = int((np.isnan(numeric) & (stripped.to_numpy() != "")).sum())
    non_positive = int((numeric <= 0).sum())
    numeric[numeric <= 0] = np.nan
    numeric[~np.isfinite(numeric)] = np.nan
    if isinstance(values, pd.Series):
        numeric = numeric[:, 0]
    return numeric, unparseable, non_positive


def _log_price_issues(path: Path, unparseable: int, non_positive: int) -> None:
    if unparseable:
        logger.warning(f"{path}: {unparseable} unparseable price cells treated as missing")
    if non_positive:
        logger.warning(f"{path}: {non_positive} non-positive prices treated as missing")


def _load_long(path: Path) -> tuple[list, list[str], np.ndarray, np.ndarray]:
    raw = read_raw_csv(path)
    header = _header(raw, path)
    if sorted(header) != sorted(LONG_COLUMNS):
        raise SchemaError(
            path, f"header must be {','.join(LONG_COLUMNS)}, got {','.join(header)}", line=1
        )
    frame = raw.iloc[1:].reset_index(drop=True)
    frame.columns = header

    frame["ticker"] = frame["ticker"].str.strip().str.upper()
    for ticker in frame["ticker"].unique():
        try:
            validate_ticker(ticker)
        except ValidationError as e:
            row = int(np.flatnonzero((frame["ticker"] == ticker).to_numpy())[0])
            raise SchemaError(path, e.message, line=row + 2) from e
    frame["date"] = parse_iso_dates(frame["date"], path)

    duplicated = frame.duplicated(["date", "ticker"], keep="first")
    if duplicated.any():
        row = int(np.flatnonzero(duplicated.to_numpy())[0])
        raise DuplicateRecordError(
            path, str(frame["date"].iloc[row]), frame["ticker"].iloc[row], line=row + 2
        )

    open_values, bad_open, nonpos_open = _parse_prices(frame["open"])
    close_values, bad_close, nonpos_close = _parse_prices(frame["close"])
    _log_price_issues(path, bad_open + bad_close, nonpos_open + nonpos_close)
    frame["open"] = open_values
    frame["close"] = close_values

    open_wide = frame.pivot(index="date", columns="ticker", values="open").sort_index()
    close_wide = frame.pivot(index="date", columns="ticker", values="close").sort_index()
    open_wide = open_wide.reindex(columns=sorted(open_wide.columns))
    close_wide = close_wide.reindex(index=open_wide.index, columns=open_wide.columns)
    return (
        list(open_wide.index),
        list(open_wide.columns),
        open_wide.to_numpy(dtype=np.float64),
        close_wide.to_numpy(dtype=np.float64),
    )


def _read_wide(path: Path) -> pd.DataFrame:
    raw = read_raw_csv(path)
    header = _header(raw, path)
    if header[0] != "date" or len(header) < 2:
        raise SchemaError(path, "first column must be 'date' followed by ticker columns", line=1)
    tickers = [str(c).strip().upper() for c in raw.iloc[0].tolist()[1:]]
    for ticker in tickers:
        try:
            validate_ticker(ticker)
        except ValidationError as e:
            raise SchemaError(path, e.message, line=1) from e
    if len(set(tickers)) != len(tickers):
        raise SchemaError(path, "duplicate ticker columns in header", line=1)

    body = raw.iloc[1:].reset_index(drop=True)
    dates = parse_iso_dates(body.iloc[:, 0], path)
    duplicated = dates.duplicated(keep="first")
    if duplicated.any():
        row = int(np.flatnonzero(duplicated.to_numpy())[0])
        raise DuplicateRecordError(path, str(dates.iloc[row]), "*", line=row + 2)

    prices, unparseable, non_positive = _parse_prices(body.iloc[:, 1:])
    _log_price_issues(path, unparseable, non_positive)
    return pd.DataFrame(prices, index=list(dates), columns=tickers)


def _wide_paths(path: Path) -> tuple[Path, Path]:
    directory = path if path.is_dir() else path.parent
    return directory / "open.csv", directory / "close.csv"


def _load_wide(path: Path) -> tuple[list, list[str], np.ndarray, np.ndarray]:
    open_path, close_path = _wide_paths(path)
    open_frame = _read_wide(open_path)
    close_frame = _read_wide(close_path)

    dates = sorted(set(open_frame.index) | set(close_frame.index))
    tickers = sorted(set(open_frame.columns) | set(close_frame.columns))
    open_frame = open_frame.reindex(index=dates, columns=tickers)
    close_frame = close_frame.reindex(index=dates, columns=tickers)
    return (
        dates,
        tickers,
        open_frame.to_numpy(dtype=np.float64),
        close_frame.to_numpy(dtype=np.float64),
    )


def load_prices(
    path: Path | str, format: str = "long", sectors: SectorTable | None = None
) -> PricePanel:
    """
    Load an open/close price panel.

    Args:
        path: Long-format CSV file, or (wide) the directory holding open.csv and
            close.csv or either of those two files
        format: "long" or "wide"
        sectors: Optional sector table; unclassified tickers get "unknown"

    Returns:
        PricePanel with dates ascending and tickers sorted

    Raises:
        SchemaError: Malformed header, unparseable date, unknown format
        DuplicateRecordError: The same (date, ticker) appears twice
    """
    path = Path(path)
    if format not in PRICE_FORMATS:
        raise SchemaError(path, f"unknown price format {format!r}; use one of {PRICE_FORMATS}")

    if format == "long":
        dates, tickers, open_values, close_values = _load_long(path)
    else:
        dates, tickers, open_values, close_values = _load_wide(path)

    table = sectors or SectorTable()
    labels = table.labels_for(tickers)
    missing = int((np.isnan(open_values) | np.isnan(close_values)).sum())
    logger.info(
        f"Loaded {len(dates)} dates x {len(tickers)} tickers from {path} "
        f"({missing} cells with a missing price)"
    )
    return PricePanel(tuple(dates), tuple(tickers), labels, open_values, close_values)


def load_sectors(path: Path | str) -> SectorTable:
    """
    Load the ``ticker,sector`` metadata file.

    Sector strings may be GICS names or their abbreviations, in any case.

    Raises:
        SchemaError: Bad header or unknown sector label (with line number)
        DuplicateRecordError: A ticker listed twice
    """
    path = Path(path)
    raw = read_raw_csv(path)
    header = _header(raw, path)
    if sorted(header) != sorted(SECTOR_COLUMNS):
        raise SchemaError(path, f"header must be ticker,sector, got {','.join(header)}", line=1)

    mapping: dict[str, str] = {}
    for offset, values in enumerate(raw.iloc[1:].itertuples(index=False), start=2):
        row_dict = dict(zip(header, values))
        try:
            row = SectorCSVRow(**row_dict)
        except PydanticValidationError as e:
            detail = "; ".join(err["msg"] for err in e.errors())
            raise SchemaError(path, f"invalid sector row: {detail}", line=offset)
        if row.ticker in mapping:
            raise DuplicateRecordError(path, "sector", row.ticker, line=offset)
        mapping[row.ticker] = row.sector

    logger.info(f"Loaded sector labels for {len(mapping)} tickers from {path}")
    return SectorTable(mapping)
