"""Logging configuration with run-context stamping."""

import logging
import os
from logging.handlers import RotatingFileHandler
from pathlib import Path


class RunContextFilter(logging.Filter):
    """Stamp every record with the active pipeline stage and seed.

    The formatter references ``%(stage)s`` and ``%(seed)s``; records emitted
    outside a CLI run get ``-`` for both.
    """

    def __init__(self, stage: str = "-", seed: int | None = None):
        """
        Initialize filter.

        Args:
            stage: Pipeline stage name (e.g. "ingest", "fit-static")
            seed: Master seed of the run, if any
        """
        super().__init__()
        self.stage = stage
        self.seed = "-" if seed is None else str(seed)

    def filter(self, record: logging.LogRecord) -> bool:
        """
        Add stage/seed attributes to the record.

        Args:
            record: Log record to annotate

        Returns:
            Always True (records are never dropped)
        """
        if not hasattr(record, "stage"):
            record.stage = self.stage
        if not hasattr(record, "seed"):
            record.seed = self.seed
        return True


def _context_filter() -> RunContextFilter:
    """Return the filter attached to the root handlers, creating one if needed."""
    for handler in logging.getLogger().handlers:
        for f in handler.filters:
            if isinstance(f, RunContextFilter):
                return f
    return RunContextFilter()


def setup_logging(level: int = logging.INFO, log_file: str | Path | None = None) -> None:
    """
    Configure logging with run context and file rotation.

    Args:
        level: Logging level (default: INFO)
        log_file: Path to log file. Falls back to the MARKET_ISING_LOG_FILE
                  environment variable; no file logging when neither is set.

    Example:
        >>> from src.lib.logging_config import setup_logging
        >>> setup_logging(logging.DEBUG, log_file="out/run.log")
    """
    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    context_filter = _context_filter()

    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - [%(stage)s seed=%(seed)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    if not root_logger.handlers:
        console_handler = logging.StreamHandler()
        console_handler.setLevel(level)
        console_handler.setFormatter(formatter)
        console_handler.addFilter(context_filter)
        root_logger.addHandler(console_handler)
    else:
        for handler in root_logger.handlers:
            handler.setLevel(level)
            if not any(isinstance(f, RunContextFilter) for f in handler.filters):
                handler.addFilter(context_filter)

    if log_file is None:
        log_file = os.getenv("MARKET_ISING_LOG_FILE")

    if log_file:
        log_path = Path(log_file)
        already_attached = any(
            isinstance(h, RotatingFileHandler) and Path(h.baseFilename) == log_path.resolve()
            for h in root_logger.handlers
        )
        if not already_attached:
            log_path.parent.mkdir(parents=True, exist_ok=True)

            # Rotating file handler: 10MB per file, keep 5 backup files
            file_handler = RotatingFileHandler(
                log_path,
                maxBytes=10 * 1024 * 1024,
                backupCount=5,
                encoding="utf-8",
            )
            file_handler.setLevel(level)
            file_handler.setFormatter(formatter)
            file_handler.addFilter(context_filter)
            root_logger.addHandler(file_handler)


def set_run_context(stage: str, seed: int | None = None) -> None:
    """
    Update the stage/seed stamped onto subsequent log records.

    Args:
        stage: Pipeline stage name
        seed: Master seed of the run
    """
    context_filter = _context_filter()
    context_filter.stage = stage
    context_filter.seed = "-" if seed is None else str(seed)
