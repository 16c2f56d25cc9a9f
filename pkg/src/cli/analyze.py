"""Analyze command: network and dynamics diagnostics of the fitted models."""

import click

from src.cli.common import (
    console,
    handle_cli_errors,
    load_panel,
    print_summary,
    print_written,
    start_stage,
)
from src.lib.artifacts import StagedOutput
from src.lib.run_config import REPORT_DIR, SUMMARY_FILE
from src.services.model_store import load_kinetic_model, load_static_model
from src.services.report_builder import KINETIC_SECTION, STATIC_SECTION, build_analysis

HEADLINE_ROWS = (
    (STATIC_SECTION, "Edges retained"),
    (STATIC_SECTION, "Small-world coefficient sigma"),
    (STATIC_SECTION, "Sector assortativity"),
    (STATIC_SECTION, "Within/between ratio"),
    (KINETIC_SECTION, "Frobenius asymmetry index"),
    (KINETIC_SECTION, "Spearman rho_s between model-predicted and empirical market means"),
)


@click.command()
@click.pass_context
@handle_cli_errors
def analyze(ctx: click.Context) -> None:
    """Run every diagnostic and write the report tables and summary.json.

    The kinetic model is optional; without it the kinetic rows read "n/a".

    Example:
        market-ising --config run.toml analyze
    """
    cfg = start_stage(ctx, "analyze")
    panel = load_panel(cfg)
    static, static_meta = load_static_model(cfg.static_model_path)

    kinetic = kinetic_meta = None
    if cfg.kinetic_model_path.exists():
        kinetic, _, kinetic_meta = load_kinetic_model(cfg.kinetic_model_path)
    else:
        console.print("[yellow]⚠ No kinetic model found; kinetic rows will be n/a[/yellow]")

    bundle = build_analysis(panel, static, kinetic, cfg, static_meta, kinetic_meta)

    with StagedOutput(cfg.out_dir, "analyze") as staged:
        for relative, frame in sorted(bundle.tables.items()):
            staged.write_csv(f"{REPORT_DIR}/{relative}", frame)
        staged.write_json(f"{REPORT_DIR}/{SUMMARY_FILE}", bundle.summary)

    sections = bundle.summary["sections"]
    print_summary(
        "Analysis Highlights",
        [(label, sections[section].get(label, "n/a")) for section, label in HEADLINE_ROWS],
    )
    print_written(cfg.out_dir, staged.written)
