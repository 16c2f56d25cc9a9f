"""Custom exception classes for market-ising."""

from pathlib import Path


class MarketIsingError(Exception):
    """Base exception for all market-ising errors."""

    def __init__(self, message: str):
        """Initialize with error message."""
        self.message = message
        super().__init__(message)


class DataError(MarketIsingError):
    """Input data validation or processing errors."""

    pass


class SchemaError(DataError):
    """A price, sector or panel file does not match its documented schema."""

    def __init__(self, path: Path | str, detail: str, line: int | None = None):
        """
        Initialize schema error.

        Args:
            path: File that failed to parse
            detail: What is wrong with the file
            line: 1-based line number of the offending row (header is line 1)
        """
        self.path = Path(path)
        self.line = line
        location = f"{self.path}:{line}" if line is not None else str(self.path)
        super().__init__(f"Schema error in {location}: {detail}")


class DuplicateRecordError(DataError):
    """The same (date, ticker) cell appears more than once."""

    def __init__(self, path: Path | str, date: str, ticker: str, line: int | None = None):
        """
        Initialize duplicate record error.

        Args:
            path: File containing the duplicate
            date: Duplicated date
            ticker: Duplicated ticker
            line: Line of the second occurrence
        """
        location = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"Duplicate record for ({date}, {ticker}) in {location}")


class EmptyPanelError(DataError):
    """No tickers or dates survive panel filtering."""

    def __init__(self, reason: str = "no ticker is observed on every date"):
        """Initialize with the reason the panel is empty."""
        super().__init__(f"Panel is empty after filtering: {reason}")


class InsufficientDataError(DataError):
    """Not enough observations for the requested statistic."""

    def __init__(self, what: str, required: int, available: int):
        """
        Initialize insufficient data error.

        Args:
            what: Name of the statistic or fit
            required: Minimum number of observations needed
            available: Number of observations available
        """
        message = f"{what} needs at least {required} observations, got {available}"
        super().__init__(message)


class ModelError(MarketIsingError):
    """Model construction or numerical errors."""

    pass


class OracleSizeError(ModelError):
    """Exact enumeration requested for a system that is too large."""

    def __init__(self, n: int, limit: int):
        """Initialize with system size and enumeration limit."""
        super().__init__(
            f"Exact enumeration over 2^{n} states refused (limit N <= {limit}). "
            "Use the Gibbs sampler instead."
        )


class DivergenceError(ModelError):
    """Parameters became non-finite during optimization."""

    def __init__(self, where: str, iteration: int, hint: str = "reduce the step size"):
        """
        Initialize divergence error.

        Args:
            where: Which fit diverged (e.g. "static fit", "stock AAPL")
            iteration: Iteration at which non-finite values appeared
            hint: Suggested remedy
        """
        message = f"Non-finite parameters in {where} at iteration {iteration}; {hint}"
        super().__init__(message)


class ConfigurationError(MarketIsingError):
    """Configuration errors."""

    pass


class ValidationError(ConfigurationError):
    """Run configuration or parameter validation errors."""

    pass


class ArtifactError(MarketIsingError):
    """Reading or writing an artifact failed."""

    pass


# Error message helpers


def format_error_message(error: Exception) -> str:
    """
    Format exception into user-friendly error message.

    Args:
        error: The exception to format

    Returns:
        Formatted error message
    """
    if isinstance(error, MarketIsingError):
        return error.message

    error_type = type(error).__name__
    return f"{error_type}: {str(error)}"


def get_error_color(error: Exception) -> str:
    """
    Get Rich color for error type.

    Args:
        error: The exception

    Returns:
        Rich color name
    """
    if isinstance(error, DivergenceError):
        return "yellow"
    elif isinstance(error, DataError):
        return "red"
    elif isinstance(error, ConfigurationError):
        return "orange1"
    elif isinstance(error, ArtifactError):
        return "magenta"
    else:
        return "red"


def exit_code_for(error: BaseException) -> int:
    """
    Map an exception to the CLI exit code.

    0 success, 2 validation error, 3 numerical divergence, 4 I/O error.
    Unknown errors exit with 1.
    """
    if isinstance(error, DivergenceError):
        return 3
    if isinstance(error, (ArtifactError, OSError)):
        return 4
    if isinstance(error, (ConfigurationError, DataError, ModelError)):
        return 2
    return 1
