"""Shared plumbing for the pipeline subcommands."""

import functools
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any, TypeVar

import click
from rich.console import Console
from rich.table import Table

from src.lib.errors import (
    MarketIsingError,
    exit_code_for,
    format_error_message,
    get_error_color,
)
from src.lib.logging_config import set_run_context, setup_logging
from src.lib.run_config import RUN_LOG_FILE, RunConfig, load_run_config
from src.models.sectors import SectorTable
from src.models.spin_panel import SpinPanel
from src.services.panel_builder import load_spin_panel
from src.services.price_loader import load_sectors

console = Console()
logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])


def handle_cli_errors(func: F) -> F:
    """
    Print known errors in colour and exit with the mapped code.

    Exit codes: 2 validation, 3 numerical divergence, 4 I/O.
    """

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except (MarketIsingError, OSError) as e:
            color = get_error_color(e)
            console.print(f"[{color}]✗ Error: {format_error_message(e)}[/{color}]")
            logger.error(format_error_message(e))
            sys.exit(exit_code_for(e))

    return wrapper  # type: ignore[return-value]


def load_config(ctx: click.Context) -> RunConfig:
    """Run configuration from ``--config`` (or defaults) with flag overrides applied."""
    opts = ctx.obj
    path = opts.get("CONFIG_FILE")
    cfg = load_run_config(path) if path else RunConfig()
    return cfg.with_overrides(
        out=opts.get("OUT"), seed=opts.get("SEED"), workers=opts.get("WORKERS")
    )


def start_stage(ctx: click.Context, stage: str, cfg: RunConfig | None = None) -> RunConfig:
    """
    Validate inputs for ``stage`` and attach ``run.log`` in the output directory.

    Nothing is written before validation passes.
    """
    cfg = cfg or load_config(ctx)
    cfg.validate_for_stage(stage)
    set_run_context(stage, cfg.seed)
    level = logging.DEBUG if ctx.obj.get("VERBOSE") else logging.INFO
    setup_logging(level=level, log_file=cfg.out_dir / RUN_LOG_FILE)
    logger.info(f"Starting {stage} (workers={cfg.workers}, out={cfg.out_dir})")
    return cfg


def sector_table(cfg: RunConfig) -> SectorTable | None:
    return load_sectors(cfg.input.sectors) if cfg.input.sectors else None


def load_panel(cfg: RunConfig) -> SpinPanel:
    panel = load_spin_panel(cfg.panel_path, sector_table(cfg))
    logger.info(f"Loaded panel T={panel.T}, N={panel.N} from {cfg.panel_path}")
    return panel


def print_summary(title: str, rows: list[tuple[str, Any]]) -> None:
    table = Table(title=title)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", justify="right", style="green")
    for label, value in rows:
        table.add_row(label, str(value))
    console.print(table)


def print_written(out_dir: Path, written: list[str]) -> None:
    console.print(f"[green]✓ Wrote {len(written)} artifact(s) to {out_dir}[/green]")
    for relative in written:
        console.print(f"  [dim]{relative}[/dim]")
