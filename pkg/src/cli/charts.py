"""Charts command: SVG figures from the report CSVs."""

import click

from src.cli.common import console, handle_cli_errors, print_written, start_stage
from src.lib.artifacts import StagedOutput
from src.lib.run_config import REPORT_DIR
from src.services.charts import render_charts


@click.command()
@click.pass_context
@handle_cli_errors
def charts(ctx: click.Context) -> None:
    """Render one SVG per report series into charts/.

    Reads only the CSVs written by `analyze`; missing or empty tables are
    skipped with a note.

    Example:
        market-ising --out out charts
    """
    cfg = start_stage(ctx, "charts")

    with StagedOutput(cfg.out_dir, "charts") as staged:
        outcomes = render_charts(cfg.out_dir / REPORT_DIR, staged)

    for outcome in outcomes:
        if outcome.path is None:
            console.print(f"[dim]- {outcome.name}: {outcome.note}[/dim]")
    print_written(cfg.out_dir, staged.written)
