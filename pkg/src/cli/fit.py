"""Model fitting commands."""

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
from src.lib.run_config import (
    KINETIC_MODEL_FILE,
    KINETIC_TRACE_FILE,
    STATIC_MODEL_FILE,
    STATIC_TRACE_FILE,
)
from src.services.kinetic_fitter import fit_kinetic, per_stock_trace_frame
from src.services.model_store import (
    kinetic_fit_meta,
    kinetic_model_payload,
    static_fit_meta,
    static_model_payload,
)
from src.services.panel_statistics import empirical_moments
from src.services.static_fitter import fit_static, trace_frame


@click.command(name="fit-static")
@click.pass_context
@handle_cli_errors
def fit_static_cmd(ctx: click.Context) -> None:
    """Fit the static Ising model (fields h, symmetric couplings J).

    Uses exact moments when static_fit.exact is set (N <= 20), otherwise
    Monte Carlo maximum likelihood with the Gibbs sampler.

    Example:
        market-ising --config run.toml --seed 7 fit-static
    """
    cfg = start_stage(ctx, "fit-static")
    panel = load_panel(cfg)
    fit_cfg = cfg.static_fit_config()

    model, trace = fit_static(empirical_moments(panel), fit_cfg, panel.tickers)

    meta = static_fit_meta(fit_cfg, trace)

    with StagedOutput(cfg.out_dir, "fit-static") as staged:
        staged.write_json(STATIC_MODEL_FILE, static_model_payload(model, meta))
        staged.write_csv(STATIC_TRACE_FILE, trace_frame(trace))

    print_summary(
        "Static Fit",
        [
            ("Stocks (N)", model.n),
            ("Mode", "exact" if fit_cfg.exact else "gibbs"),
            ("Iterations", trace.iterations),
            ("Converged", trace.converged),
            ("Max-abs residual", f"{trace.final_max_abs_residual:.3g}"),
        ],
    )
    if not trace.converged:
        console.print("[yellow]⚠ Static fit stopped before reaching the tolerance[/yellow]")
    print_written(cfg.out_dir, staged.written)


@click.command(name="fit-kinetic")
@click.pass_context
@handle_cli_errors
def fit_kinetic_cmd(ctx: click.Context) -> None:
    """Fit the kinetic Ising model (gamma, self-memory a, directed J).

    Each stock is an independent penalized likelihood fit; results do not
    depend on the worker count.

    Example:
        market-ising --config run.toml --workers 8 fit-kinetic
    """
    cfg = start_stage(ctx, "fit-kinetic")
    panel = load_panel(cfg)
    fit_cfg = cfg.kinetic_fit_config()

    model, traces = fit_kinetic(panel, fit_cfg)
    penalties = cfg.kinetic_fit.penalties.model_dump()
    meta = kinetic_fit_meta(fit_cfg, traces, cfg.seed)

    with StagedOutput(cfg.out_dir, "fit-kinetic") as staged:
        staged.write_json(KINETIC_MODEL_FILE, kinetic_model_payload(model, penalties, meta))
        staged.write_csv(KINETIC_TRACE_FILE, per_stock_trace_frame(traces))

    print_summary(
        "Kinetic Fit",
        [
            ("Stocks (N)", model.n),
            ("Basis functions (M)", model.basis.n_basis),
            ("Converged stocks", f"{meta['converged_stocks']}/{meta['n_stocks']}"),
            ("Max gradient", f"{meta['max_gradient']:.3g}"),
        ],
    )
    stalled = [t.ticker for t in traces if not t.converged]
    if stalled:
        console.print(f"[yellow]⚠ Not converged: {', '.join(stalled[:10])}[/yellow]")
    print_written(cfg.out_dir, staged.written)
