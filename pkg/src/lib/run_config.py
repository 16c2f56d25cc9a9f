"""Run configuration loaded from a TOML file.

Sections: ``[input]``, ``[output]``, ``[ingest]``, ``[static_fit]`` (with
``[static_fit.gibbs]``), ``[kinetic_fit]`` (with ``[kinetic_fit.penalties]``),
``[analysis]`` and ``[windows]``, plus top-level ``seed`` and ``workers``.
Relative paths resolve against the directory holding the config file.

Example::

    seed = 7
    workers = 4

    [input]
    prices = "data/prices.csv"
    sectors = "data/sectors.csv"

    [kinetic_fit]
    n_basis = 30

    [windows]
    GFC = [2007-10-01, 2008-10-01]
"""

import logging

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from datetime import date
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from src.lib import config
from src.lib.errors import ConfigurationError, ValidationError
from src.lib.validators import validate_seed, validate_window
from src.models.kinetic_ising import KineticFitConfig, PenaltyConfig
from src.models.static_ising import GibbsConfig, StaticFitConfig

logger = logging.getLogger(__name__)

STAGES = ("ingest", "fit-static", "fit-kinetic", "analyze", "charts")

PANEL_FILE = "panel.csv"
STATIC_MODEL_FILE = "static_model.json"
KINETIC_MODEL_FILE = "kinetic_model.json"
INGEST_REPORT_FILE = "ingest_report.json"
INGEST_BREADTH_FILE = "ingest_breadth.csv"
STATIC_TRACE_FILE = "static_fit_trace.csv"
KINETIC_TRACE_FILE = "kinetic_fit_trace.csv"
REPORT_DIR = "report"
SUMMARY_FILE = "summary.json"
CHART_DIR = "charts"
RUN_LOG_FILE = "run.log"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class InputSection(_Section):
    prices: Path | None = None
    sectors: Path | None = None
    format: Literal["long", "wide"] = "long"
    panel: Path | None = None
    static_model: Path | None = None
    kinetic_model: Path | None = None


class OutputSection(_Section):
    dir: Path = Path("out")


class IngestSection(_Section):
    drop_incomplete_dates: bool = False


class GibbsSection(_Section):
    n_chains: int = Field(config.GIBBS_N_CHAINS, ge=1)
    burn_in_sweeps: int = Field(config.GIBBS_BURN_IN_SWEEPS, ge=0)
    sweeps_per_sample: int = Field(config.GIBBS_SWEEPS_PER_SAMPLE, ge=1)
    n_samples: int = Field(config.GIBBS_N_SAMPLES, ge=1)
    scan: Literal["systematic", "random"] = "systematic"


class StaticFitSection(_Section):
    max_iterations: int = Field(config.STATIC_MAX_ITERATIONS, ge=1)
    step_size: float = Field(config.STATIC_STEP_SIZE, gt=0)
    step_schedule: Literal["constant", "decay"] = config.STATIC_STEP_SCHEDULE
    tolerance: float = Field(config.STATIC_TOLERANCE, gt=0)
    init: Literal["zeros", "mean_field"] = config.STATIC_INIT
    exact: bool = False
    gibbs: GibbsSection = Field(default_factory=GibbsSection)


class PenaltySection(_Section):
    l2_gamma: float = Field(config.KINETIC_L2_GAMMA, ge=0)
    l2_a: float = Field(config.KINETIC_L2_A, ge=0)
    l2_j: float = Field(config.KINETIC_L2_J, ge=0)
    smooth_gamma: float = Field(config.KINETIC_SMOOTH_GAMMA, ge=0)


class KineticFitSection(_Section):
    n_basis: int = Field(config.KINETIC_BASIS_COUNT, ge=2)
    max_iterations: int = Field(config.KINETIC_MAX_ITERATIONS, ge=1)
    tolerance: float = Field(config.KINETIC_TOLERANCE, gt=0)
    direction: Literal["newton", "gradient"] = config.KINETIC_DIRECTION
    step_size: float = Field(config.KINETIC_STEP_SIZE, gt=0)
    penalties: PenaltySection = Field(default_factory=PenaltySection)


class AnalysisSection(_Section):
    filter_fraction: float = Field(config.FILTER_FRACTION, gt=0, le=1)
    backbone_extra_fraction: float = Field(config.BACKBONE_EXTRA_FRACTION, ge=0, le=1)
    prominence_top_fraction: float = Field(config.PROMINENCE_TOP_FRACTION, gt=0, le=1)
    prominence_percentile: float = Field(config.PROMINENCE_PERCENTILE, ge=0, le=100)
    sector_edge_percentile: float = Field(config.SECTOR_EDGE_PERCENTILE, ge=0, le=100)
    random_graph_realizations: int = Field(config.RANDOM_GRAPH_REALIZATIONS, ge=1)
    watts_strogatz_beta: float = Field(config.WATTS_STROGATZ_BETA, ge=0, le=1)
    watts_strogatz_realizations: int = Field(config.WATTS_STROGATZ_REALIZATIONS, ge=1)
    calibration_bins: int = Field(config.CALIBRATION_BINS, ge=1)
    breadth_bins: int = Field(config.BREADTH_HISTOGRAM_BINS, ge=1)
    parameter_bins: int = Field(config.PARAMETER_HISTOGRAM_BINS, ge=1)
    top_k: int = Field(config.TOP_K, ge=1)
    symmetrize: bool = False
    validate_exact: bool = False


class RunConfig(_Section):
    """Complete, validated settings of a pipeline run."""

    seed: int = 0
    workers: int = Field(config.DEFAULT_WORKERS, ge=1)
    input: InputSection = Field(default_factory=InputSection)
    output: OutputSection = Field(default_factory=OutputSection)
    ingest: IngestSection = Field(default_factory=IngestSection)
    static_fit: StaticFitSection = Field(default_factory=StaticFitSection)
    kinetic_fit: KineticFitSection = Field(default_factory=KineticFitSection)
    analysis: AnalysisSection = Field(default_factory=AnalysisSection)
    windows: dict[str, tuple[date, date]] = Field(
        default_factory=lambda: dict(config.DEFAULT_WINDOWS)
    )

    @field_validator("seed")
    @classmethod
    def check_seed(cls, v: int) -> int:
        try:
            return validate_seed(v)
        except ValidationError as e:
            raise ValueError(e.message) from e

    @model_validator(mode="after")
    def check_windows(self) -> "RunConfig":
        for name, (start, end) in self.windows.items():
            try:
                validate_window(name, start, end)
            except ValidationError as e:
                raise ValueError(e.message) from e
        return self

    # Derived locations of stage artifacts

    @property
    def out_dir(self) -> Path:
        return self.output.dir

    @property
    def panel_path(self) -> Path:
        return self.input.panel or self.out_dir / PANEL_FILE

    @property
    def static_model_path(self) -> Path:
        return self.input.static_model or self.out_dir / STATIC_MODEL_FILE

    @property
    def kinetic_model_path(self) -> Path:
        return self.input.kinetic_model or self.out_dir / KINETIC_MODEL_FILE

    # Conversion into the model-level configs

    def gibbs_config(self) -> GibbsConfig:
        g = self.static_fit.gibbs
        return GibbsConfig(
            n_chains=g.n_chains,
            burn_in_sweeps=g.burn_in_sweeps,
            sweeps_per_sample=g.sweeps_per_sample,
            n_samples=g.n_samples,
            seed=self.seed,
            scan=g.scan,
            workers=self.workers,
        )

    def static_fit_config(self) -> StaticFitConfig:
        s = self.static_fit
        return StaticFitConfig(
            max_iterations=s.max_iterations,
            step_size=s.step_size,
            step_schedule=s.step_schedule,
            tolerance=s.tolerance,
            gibbs=self.gibbs_config(),
            init=s.init,
            exact=s.exact,
        )

    def kinetic_fit_config(self) -> KineticFitConfig:
        k = self.kinetic_fit
        return KineticFitConfig(
            n_basis=k.n_basis,
            penalties=PenaltyConfig(**k.penalties.model_dump()),
            max_iterations=k.max_iterations,
            tolerance=k.tolerance,
            direction=k.direction,
            step_size=k.step_size,
            workers=self.workers,
        )

    def with_overrides(
        self,
        out: Path | None = None,
        seed: int | None = None,
        workers: int | None = None,
    ) -> "RunConfig":
        """Copy with command-line flags applied on top of the file values."""
        data = self.model_dump()
        if out is not None:
            data["output"]["dir"] = Path(out)
        if seed is not None:
            data["seed"] = seed
        if workers is not None:
            data["workers"] = workers
        return _build(data)

    def validate_for_stage(self, stage: str) -> None:
        """
        Check that every input ``stage`` reads exists, before any work starts.

        The kinetic model is optional for ``analyze``; its diagnostics then
        report "n/a".

        Raises:
            ValidationError: Unknown stage or missing input
        """
        if stage not in STAGES:
            raise ValidationError(f"Unknown stage {stage!r}; expected one of {', '.join(STAGES)}")
        required: list[tuple[str, Path | None]] = []
        if stage == "ingest":
            required.append(("input.prices", self.input.prices))
            if self.input.sectors is not None:
                required.append(("input.sectors", self.input.sectors))
        elif stage in ("fit-static", "fit-kinetic"):
            required.append(("panel", self.panel_path))
        elif stage == "analyze":
            required.append(("panel", self.panel_path))
            required.append(("static model", self.static_model_path))
        elif stage == "charts":
            required.append(("report directory", self.out_dir / REPORT_DIR))

        for label, path in required:
            if path is None:
                raise ValidationError(f"{stage}: {label} is not configured")
            if not Path(path).exists():
                raise ValidationError(f"{stage}: {label} not found at {path}")
        logger.debug(f"Configuration valid for {stage}")


def _build(data: dict) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except PydanticValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "config"
        raise ValidationError(f"Invalid configuration at {location}: {first['msg']}") from e


def _resolve_paths(cfg: RunConfig, base: Path) -> RunConfig:
    def resolve(path: Path | None) -> Path | None:
        if path is None or path.is_absolute():
            return path
        return base / path

    inputs = cfg.input.model_copy(
        update={
            name: resolve(getattr(cfg.input, name))
            for name in ("prices", "sectors", "panel", "static_model", "kinetic_model")
        }
    )
    output = cfg.output.model_copy(update={"dir": resolve(cfg.output.dir)})
    return cfg.model_copy(update={"input": inputs, "output": output})


def load_run_config(path: Path | str) -> RunConfig:
    """
    Read and validate a TOML run configuration.

    Raises:
        ConfigurationError: File missing or not valid TOML
        ValidationError: A value violates its constraints
    """
    path = Path(path)
    try:
        with path.open("rb") as handle:
            data = tomllib.load(handle)
    except FileNotFoundError as e:
        raise ConfigurationError(f"Config file not found: {path}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigurationError(f"Config file {path} is not valid TOML: {e}") from e
    cfg = _resolve_paths(_build(data), path.resolve().parent)
    logger.info(f"Loaded configuration from {path}")
    return cfg
