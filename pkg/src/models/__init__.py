"""
Domain types for market-ising.

Panels, moment sets, model parameters and network results are immutable
dataclasses; their numpy arrays are stored read-only.
"""

from src.models.histogram import Histogram
from src.models.interaction_graph import (
    BackboneGraph,
    BenchmarkResult,
    DistributionSummary,
    InteractionGraph,
    ProminenceResult,
    SectorMatrix,
    SectorNetwork,
    WattsStrogatzResult,
)
from src.models.kinetic_ising import (
    FieldDecomposition,
    HatBasis,
    KineticFitConfig,
    KineticIsingModel,
    PenaltyConfig,
    StockFitTrace,
)
from src.models.moments import MomentSet
from src.models.price_panel import PricePanel
from src.models.sectors import SectorTable
from src.models.spin_panel import PartialSpinPanel, SpinPanel
from src.models.static_ising import (
    GibbsConfig,
    StaticFitConfig,
    StaticFitTrace,
    StaticIsingModel,
    TraceRow,
)

__all__ = [
    "BackboneGraph",
    "BenchmarkResult",
    "DistributionSummary",
    "FieldDecomposition",
    "GibbsConfig",
    "HatBasis",
    "Histogram",
    "InteractionGraph",
    "KineticFitConfig",
    "KineticIsingModel",
    "MomentSet",
    "PartialSpinPanel",
    "PenaltyConfig",
    "PricePanel",
    "ProminenceResult",
    "SectorMatrix",
    "SectorNetwork",
    "SectorTable",
    "SpinPanel",
    "StaticFitConfig",
    "StaticFitTrace",
    "StaticIsingModel",
    "StockFitTrace",
    "TraceRow",
    "WattsStrogatzResult",
]
