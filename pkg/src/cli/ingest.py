"""Ingest command: prices to spin panel."""

from pathlib import Path

import click

from src.cli.common import (
    console,
    handle_cli_errors,
    load_config,
    print_summary,
    print_written,
    sector_table,
    start_stage,
)
from src.lib.artifacts import StagedOutput
from src.lib.run_config import INGEST_BREADTH_FILE, INGEST_REPORT_FILE, PANEL_FILE
from src.services.analytics.coupling_analysis import histogram_frame
from src.services.panel_builder import binarize, filter_complete, ingest_report, spin_panel_frame
from src.services.panel_statistics import breadth_histogram
from src.services.price_loader import load_prices


@click.command()
@click.option(
    "--prices",
    type=click.Path(path_type=Path),
    help="Price file (overrides input.prices)",
)
@click.option(
    "--sectors",
    type=click.Path(path_type=Path),
    help="ticker,sector file (overrides input.sectors)",
)
@click.option(
    "--format",
    "price_format",
    type=click.Choice(["long", "wide"]),
    help="Price file layout (overrides input.format)",
)
@click.pass_context
@handle_cli_errors
def ingest(
    ctx: click.Context, prices: Path | None, sectors: Path | None, price_format: str | None
) -> None:
    """Load prices, binarize daily moves and keep the complete panel.

    Writes panel.csv, ingest_report.json and ingest_breadth.csv.

    Examples:
        market-ising --config run.toml ingest
        market-ising --out out ingest --prices data/prices.csv --sectors data/sectors.csv
    """
    cfg = load_config(ctx)
    updates = {"prices": prices, "sectors": sectors, "format": price_format}
    updates = {k: v for k, v in updates.items() if v is not None}
    if updates:
        cfg = cfg.model_copy(update={"input": cfg.input.model_copy(update=updates)})
    cfg = start_stage(ctx, "ingest", cfg)

    prices_panel = load_prices(cfg.input.prices, cfg.input.format, sector_table(cfg))
    partial = binarize(prices_panel)
    panel = filter_complete(partial, drop_dates=cfg.ingest.drop_incomplete_dates)
    report = ingest_report(partial, panel)

    with StagedOutput(cfg.out_dir, "ingest") as staged:
        staged.write_csv(PANEL_FILE, spin_panel_frame(panel))
        staged.write_json(INGEST_REPORT_FILE, report)
        staged.write_csv(
            INGEST_BREADTH_FILE,
            histogram_frame(breadth_histogram(panel, cfg.analysis.breadth_bins)),
        )

    print_summary(
        "Ingest Summary",
        [
            ("Trading days (T)", panel.T),
            ("Stocks (N)", panel.N),
            ("Dropped tickers", report["dropped_ticker_count"]),
            ("Dropped dates", report["dropped_date_count"]),
            ("Missing cells", report["missing_cells"]),
        ],
    )
    if report["dropped_tickers"]:
        shown = ", ".join(report["dropped_tickers"][:10])
        console.print(f"[yellow]⚠ Dropped incomplete tickers: {shown}[/yellow]")
    print_written(cfg.out_dir, staged.written)
