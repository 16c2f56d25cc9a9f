"""Configuration check command."""

import click

from src.cli.common import console, handle_cli_errors, load_config, print_summary
from src.lib.run_config import STAGES


@click.command(name="validate-config")
@click.option(
    "--stage",
    "stages",
    multiple=True,
    type=click.Choice(STAGES),
    help="Also check that the inputs of this stage exist (repeatable)",
)
@click.pass_context
@handle_cli_errors
def validate_config(ctx: click.Context, stages: tuple[str, ...]) -> None:
    """Validate the run configuration without computing or writing anything.

    Examples:
        market-ising --config run.toml validate-config
        market-ising --config run.toml validate-config --stage ingest --stage fit-static
    """
    cfg = load_config(ctx)
    for stage in stages:
        cfg.validate_for_stage(stage)

    print_summary(
        "Run Configuration",
        [
            ("Seed", cfg.seed),
            ("Workers", cfg.workers),
            ("Output directory", cfg.out_dir),
            ("Static fit mode", "exact" if cfg.static_fit.exact else "gibbs"),
            ("Basis functions (M)", cfg.kinetic_fit.n_basis),
            ("Windows", ", ".join(cfg.windows) or "none"),
        ],
    )
    console.print("[green]✓ Configuration is valid[/green]")
