"""CLI entry point for market-ising."""

import logging
import sys
import traceback
from pathlib import Path

import click
from rich.console import Console

from src.cli import analyze, charts, config_cli, fit, ingest
from src.lib.errors import (
    MarketIsingError,
    exit_code_for,
    format_error_message,
    get_error_color,
)
from src.lib.logging_config import setup_logging
from src.lib.validators import MAX_SEED

console = Console()


@click.group()
@click.option(
    "--config",
    "config_file",
    type=click.Path(path_type=Path),
    help="Path to the TOML run configuration",
)
@click.option("--out", type=click.Path(path_type=Path), help="Output directory")
@click.option("--seed", type=click.IntRange(0, MAX_SEED), help="Master seed (unsigned 64-bit)")
@click.option("--workers", type=click.IntRange(min=1), help="Worker threads")
@click.option("--verbose", is_flag=True, help="Debug logging")
@click.pass_context
def main(
    ctx: click.Context,
    config_file: Path | None,
    out: Path | None,
    seed: int | None,
    workers: int | None,
    verbose: bool,
) -> None:
    """Static and kinetic Ising models of daily stock co-movement."""
    setup_logging(level=logging.DEBUG if verbose else logging.INFO)

    ctx.ensure_object(dict)
    ctx.obj["CONFIG_FILE"] = config_file
    ctx.obj["OUT"] = out
    ctx.obj["SEED"] = seed
    ctx.obj["WORKERS"] = workers
    ctx.obj["VERBOSE"] = verbose


def handle_exception(
    exc_type: type[BaseException], exc_value: BaseException, exc_traceback: object
) -> None:
    """
    Global exception handler for errors that escape the commands.

    Known errors exit with their mapped code; anything else exits with 1 and
    shows a traceback under --verbose.
    """
    if issubclass(exc_type, KeyboardInterrupt):
        sys.__excepthook__(exc_type, exc_value, exc_traceback)  # type: ignore[arg-type]
        return

    color = get_error_color(exc_value) if isinstance(exc_value, Exception) else "red"
    message = (
        format_error_message(exc_value) if isinstance(exc_value, Exception) else str(exc_value)
    )
    console.print(f"\n[{color}]✗ Error: {message}[/{color}]\n")

    verbose = "--verbose" in sys.argv
    if not isinstance(exc_value, MarketIsingError):
        console.print("[dim]Unexpected error occurred. Use --verbose for full traceback.[/dim]")
    if verbose:
        traceback.print_exception(exc_value)

    sys.exit(exit_code_for(exc_value))


sys.excepthook = handle_exception


@main.command()
def version() -> None:
    """Show version information."""
    click.echo("market-ising version 0.1.0")


main.add_command(ingest.ingest)
main.add_command(fit.fit_static_cmd)
main.add_command(fit.fit_kinetic_cmd)
main.add_command(analyze.analyze)
main.add_command(charts.charts)
main.add_command(config_cli.validate_config)


if __name__ == "__main__":
    main()
