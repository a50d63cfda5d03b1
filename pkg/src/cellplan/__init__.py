"""Downlink cell dimensioning for a public-safety network with mobile base stations."""

from .channel import ACCESS_MODEL, BACKHAUL_MODEL, LinkGain, PathLossModel, PowerConfig
from .geometry import CellLayout, IncidentScene, Point, build_layout, distance
from .montecarlo import McConfig, McEstimate, mc_report, mc_success_probability
from .planner import (
    FleetComparison,
    Requirements,
    Scenario,
    fleet_comparison,
    max_feasible_side,
    sweep,
)
from .throughput import (
    Architecture,
    RadioConfig,
    ResourceSharing,
    SharingMode,
    ThroughputReport,
    aggregate_throughput,
    evaluate,
    success_probability,
    validate_sharing,
)

__version__ = "0.1.0"
