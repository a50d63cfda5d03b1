"""Cell-size sweeps, feasibility search and fleet arithmetic."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .channel import PowerConfig
from .geometry import CellLayout, GeometryError, build_layout
from .throughput import (
    Architecture,
    PathLossModels,
    RadioConfig,
    ResourceSharing,
    ThroughputReport,
    evaluate,
)

log = logging.getLogger(__name__)


class InfeasibleError(RuntimeError):
    """No swept cell size meets the requirements."""


@dataclass(frozen=True)
class Requirements:
    routine_bps: float = 2e6
    incident_bps: float = 8e6
    backhaul_bps: float = 4e6

    def __post_init__(self):
        if min(self.routine_bps, self.incident_bps, self.backhaul_bps) < 0:
            raise ValueError("requirements must be non-negative")
        if self.backhaul_bps > self.incident_bps:
            raise ValueError("backhaul requirement cannot exceed the incident requirement")

    def violations(self, report: ThroughputReport) -> list[str]:
        """Names of the unmet requirements, in routine/incident/backhaul order."""
        out = []
        if report.routine_bps < self.routine_bps:
            out.append("routine")
        if report.incident_bps < self.incident_bps:
            out.append("incident")
        if report.backhaul_bps is not None and report.backhaul_bps < self.backhaul_bps:
            out.append("backhaul")
        return out


@dataclass(frozen=True)
class GeometrySpec:
    tiers: int = 2
    n_routine: int = 80
    n_incident: int = 50
    scene_width: float = 200.0
    scene_height: float = 200.0

    def layout(self, side_length: float) -> CellLayout:
        return build_layout(side_length, self.tiers, self.n_routine, self.scene_width,
                            self.scene_height, self.n_incident)


@dataclass(frozen=True)
class Scenario:
    """Everything but the cell size."""

    geometry: GeometrySpec = GeometrySpec()
    powers: PowerConfig = PowerConfig()
    radio: RadioConfig = RadioConfig()
    tdrs: Optional[ResourceSharing] = None
    fdrs: Optional[ResourceSharing] = None
    models: PathLossModels = PathLossModels()
    incident_sees_serving_bts: bool = True

    def __post_init__(self):
        w, rb = self.radio.total_bw_hz, self.radio.resource_block_hz
        if self.tdrs is None:
            object.__setattr__(self, "tdrs", ResourceSharing.tdrs(w, 25 * rb, 0.4))
        if self.fdrs is None:
            object.__setattr__(self, "fdrs", ResourceSharing.fdrs(w, 25 * rb, 10 * rb))

    def sharing(self, architecture: Architecture) -> Optional[ResourceSharing]:
        if architecture is Architecture.TDRS:
            return self.tdrs
        if architecture is Architecture.FDRS:
            return self.fdrs
        return None

    def evaluate(self, architecture: Architecture, side_length: float) -> ThroughputReport:
        return self.evaluate_layout(architecture, self.geometry.layout(side_length))

    def evaluate_layout(self, architecture: Architecture, layout: CellLayout) -> ThroughputReport:
        return evaluate(architecture, layout, self.powers, self.radio, self.sharing(architecture),
                        self.models, self.incident_sees_serving_bts)


@dataclass(frozen=True)
class SweepCurve:
    architecture: Architecture
    points: tuple[tuple[float, ThroughputReport], ...]
    skipped: tuple[tuple[float, str], ...] = ()

    @property
    def side_lengths(self) -> list[float]:
        return [L for L, _ in self.points]


def sweep_grid(l_min: float, l_max: float, step: float) -> list[float]:
    if not 0 < l_min < l_max:
        raise ValueError("need 0 < l_min < l_max")
    if not step > 0:
        raise ValueError("step must be positive")
    n = int(math.floor((l_max - l_min) / step + 1e-9))
    return [l_min + i * step for i in range(n + 1)]


def sweep(architecture: Architecture, scenario: Scenario, l_min: float = 100.0,
          l_max: float = 1500.0, step: float = 10.0, workers: int = 1) -> SweepCurve:
    grid = sweep_grid(l_min, l_max, step)

    def point(L):
        try:
            return L, scenario.evaluate(architecture, L), None
        except GeometryError as exc:
            return L, None, str(exc)

    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(point, grid))
    else:
        results = [point(L) for L in grid]

    points, skipped = [], []
    for L, report, err in results:
        if report is None:
            log.warning("skipping L=%g m: %s", L, err)
            skipped.append((L, err))
        else:
            points.append((L, report))
    return SweepCurve(architecture, tuple(points), tuple(skipped))


@dataclass(frozen=True)
class FeasibleSide:
    side_length: float
    binding: Optional[str]  # requirement violated at the next sweep point; None at L_max
    report: ThroughputReport


def max_feasible_side(architecture: Architecture, scenario: Scenario, requirements: Requirements,
                      l_min: float = 100.0, l_max: float = 1500.0, step: float = 10.0,
                      workers: int = 1) -> FeasibleSide:
    """Largest swept side length meeting every requirement (pointwise, no monotonicity assumed)."""
    curve = sweep(architecture, scenario, l_min, l_max, step, workers)
    pts = curve.points
    best = None
    for i, (L, rep) in enumerate(pts):
        if not requirements.violations(rep):
            best = i
    if best is None:
        raise InfeasibleError(
            f"no feasible side length in [{l_min:g}, {l_max:g}] m for {architecture.value}")
    L, rep = pts[best]
    binding = None
    if best + 1 < len(pts):
        binding = requirements.violations(pts[best + 1][1])[0]
    return FeasibleSide(L, binding, rep)


@dataclass(frozen=True)
class FleetComparison:
    conv_side: float
    prop_side: float
    stationary_reduction: float
    mobile_bts_count: int
    total_ratio: float
    fire_stations: int
    stationary_bts_baseline: int
    dispatch_time_factor: float
    mobile_bts_exact: float = field(default=0.0)


def fleet_comparison(conv_side: float, prop_side: float, fire_stations: int = 48_800,
                     stationary_baseline: int = 44_000, dispatch_time_factor: float = 3.0,
                     rounding: str = "ceil") -> FleetComparison:
    """Station counts of the two architectures relative to the conventional one.

    A mobile BTS that may take ``dispatch_time_factor`` times longer than a
    fire engine covers that factor squared as many stations' areas.
    """
    if min(conv_side, prop_side, fire_stations, stationary_baseline, dispatch_time_factor) <= 0:
        raise ValueError("all fleet parameters must be positive")
    if prop_side < conv_side:
        raise ValueError("proposed cell side cannot be smaller than the conventional one")
    area_ratio = _exact(conv_side) ** 2 / _exact(prop_side) ** 2
    exact = _exact(fire_stations) / _exact(dispatch_time_factor) ** 2
    if rounding == "ceil":
        mobiles = math.ceil(exact)
    elif rounding == "floor":
        mobiles = math.floor(exact)
    else:
        raise ValueError(f"unknown rounding {rounding!r}")
    ratio = area_ratio + Fraction(mobiles, stationary_baseline)
    return FleetComparison(conv_side, prop_side, float(1 - area_ratio), mobiles, float(ratio),
                           fire_stations, stationary_baseline, dispatch_time_factor, float(exact))


def _exact(x) -> Fraction:
    return Fraction(x).limit_denominator(10**12) if isinstance(x, float) else Fraction(x)
