"""YAML scenario files.

Every key is optional; missing keys take the default values below, which
reproduce the reference LTE system parameters (46 dBm BTS, 10 dB threshold,
50 resource blocks of 12 x 15 kHz, ...).
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import yaml

from .channel import PathLossModel, PowerConfig
from .montecarlo import McConfig
from .planner import GeometrySpec, Requirements, Scenario
from .throughput import (
    PathLossModels,
    RadioConfig,
    ResourceSharing,
    SharingMode,
    validate_sharing,
)

DEFAULTS: dict[str, Any] = {
    "geometry": {
        "side_length": 900.0,
        "tiers": 2,
        "n_routine": 80,
        "n_incident": 50,
        "scene_width": 200.0,
        "scene_height": 200.0,
        "sweep": {"l_min": 100.0, "l_max": 1500.0, "step": 10.0},
    },
    "powers": {
        "stationary_dbm": 46.0,
        "backhaul_dbm": 45.0,
        "mobile_dbm": 43.0,
        "noise_psd_dbm_hz": -174.0,
    },
    "radio": {
        "gamma_db": 10.0,
        "resource_blocks": 50,
        "subcarriers_per_block": 12,
        "subcarrier_spacing_hz": 15_000.0,
    },
    "sharing": {
        "tdrs": {"routine_rbs": 25, "backhaul_time_frac": 0.4},
        "fdrs": {"routine_rbs": 25, "backhaul_rbs": 10},
    },
    "requirements": {"routine_mbps": 2.0, "incident_mbps": 8.0, "backhaul_mbps": 4.0},
    "path_loss": {
        "backhaul": {"intercept_db": 34.5, "slope_db_per_decade": 35.0},
        "access": {"intercept_db": 39.3, "slope_db_per_decade": 37.6},
    },
    "interference": {"incident_sees_serving_bts": True},
    "mc": {"trials": 100_000, "seed": 0, "batch": None},
    "fleet": {
        "conv_side": 300.0,
        "prop_side": 900.0,
        "fire_stations": 48_800,
        "stationary_baseline": 44_000,
        "dispatch_time_factor": 3.0,
    },
}


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


@dataclass(frozen=True)
class SweepRange:
    l_min: float
    l_max: float
    step: float


@dataclass(frozen=True)
class FleetInputs:
    conv_side: float
    prop_side: float
    fire_stations: int
    stationary_baseline: int
    dispatch_time_factor: float


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: Scenario
    side_length: float
    sweep: SweepRange
    requirements: Requirements
    mc: McConfig
    fleet: FleetInputs
    defaults_used: tuple[tuple[str, Any], ...] = field(default=(), repr=False)


def _merge(defaults: dict, user: dict, prefix: str, used: list) -> dict:
    out = {}
    for key in user:
        if key not in defaults:
            raise ConfigError(f"{prefix}{key}", "unknown key")
    for key, dval in defaults.items():
        path = f"{prefix}{key}"
        if key not in user:
            out[key] = copy.deepcopy(dval)
            if isinstance(dval, dict):
                _merge(dval, {}, path + ".", used)
            else:
                used.append((path, dval))
        elif isinstance(dval, dict):
            if not isinstance(user[key], dict):
                raise ConfigError(path, "expected a mapping")
            out[key] = _merge(dval, user[key], path + ".", used)
        else:
            out[key] = user[key]
    return out


def _num(d: dict, key: str, path: str, *, positive=False, integer=False, lo=None, hi=None,
         optional=False):
    v = d[key]
    full = f"{path}.{key}"
    if v is None and optional:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(full, f"expected a number, got {v!r}")
    if integer and not float(v).is_integer():
        raise ConfigError(full, f"expected an integer, got {v!r}")
    if not math.isfinite(v):
        raise ConfigError(full, "must be finite")
    if positive and not v > 0:
        raise ConfigError(full, f"must be positive, got {v!r}")
    if lo is not None and v < lo:
        raise ConfigError(full, f"must be >= {lo}, got {v!r}")
    if hi is not None and v > hi:
        raise ConfigError(full, f"must be <= {hi}, got {v!r}")
    return int(v) if integer else float(v)


def build_config(raw: Optional[dict]) -> ScenarioConfig:
    """Validate a parsed mapping and fill in defaults."""
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("", "top level must be a mapping")
    used: list = []
    c = _merge(DEFAULTS, raw, "", used)

    g = c["geometry"]
    sw = g["sweep"]
    sweep = SweepRange(_num(sw, "l_min", "geometry.sweep", positive=True),
                       _num(sw, "l_max", "geometry.sweep", positive=True),
                       _num(sw, "step", "geometry.sweep", positive=True))
    if not sweep.l_min < sweep.l_max:
        raise ConfigError("geometry.sweep.l_max", "must exceed l_min")
    geometry = GeometrySpec(
        tiers=_num(g, "tiers", "geometry", integer=True, lo=1),
        n_routine=_num(g, "n_routine", "geometry", integer=True, lo=1),
        n_incident=_num(g, "n_incident", "geometry", integer=True, lo=1),
        scene_width=_num(g, "scene_width", "geometry", positive=True),
        scene_height=_num(g, "scene_height", "geometry", positive=True),
    )
    side = _num(g, "side_length", "geometry", positive=True)

    p = c["powers"]
    stat = _num(p, "stationary_dbm", "powers")
    bh = _num(p, "backhaul_dbm", "powers", optional=True)
    if bh is not None and not bh < stat:
        raise ConfigError("powers.backhaul_dbm", "backhaul power must be below stationary_dbm")
    powers = PowerConfig(stat, bh, _num(p, "mobile_dbm", "powers"),
                         _num(p, "noise_psd_dbm_hz", "powers"))

    r = c["radio"]
    radio = RadioConfig.from_db(
        _num(r, "gamma_db", "radio"),
        _num(r, "resource_blocks", "radio", integer=True, lo=1),
        _num(r, "subcarriers_per_block", "radio", integer=True, lo=1),
        _num(r, "subcarrier_spacing_hz", "radio", positive=True),
    )

    sh = c["sharing"]
    t, f = sh["tdrs"], sh["fdrs"]
    rho_b = _num(t, "backhaul_time_frac", "sharing.tdrs", lo=0.0, hi=1.0)
    tdrs = ResourceSharing.from_resource_blocks(
        SharingMode.TDRS, radio, _num(t, "routine_rbs", "sharing.tdrs", integer=True, lo=1),
        backhaul_time_frac=rho_b)
    fdrs = ResourceSharing.from_resource_blocks(
        SharingMode.FDRS, radio, _num(f, "routine_rbs", "sharing.fdrs", integer=True, lo=1),
        backhaul_rbs=_num(f, "backhaul_rbs", "sharing.fdrs", integer=True, lo=1))
    for name, s in (("sharing.tdrs", tdrs), ("sharing.fdrs", fdrs)):
        problem = validate_sharing(s)
        if problem:
            raise ConfigError(name, problem)

    pl = c["path_loss"]
    try:
        models = PathLossModels(
            backhaul=PathLossModel(_num(pl["backhaul"], "intercept_db", "path_loss.backhaul"),
                                   _num(pl["backhaul"], "slope_db_per_decade", "path_loss.backhaul")),
            access=PathLossModel(_num(pl["access"], "intercept_db", "path_loss.access"),
                                 _num(pl["access"], "slope_db_per_decade", "path_loss.access")),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("path_loss", str(exc)) from None

    q = c["requirements"]
    tu = _num(q, "routine_mbps", "requirements", lo=0.0)
    tc = _num(q, "incident_mbps", "requirements", lo=0.0)
    tb = _num(q, "backhaul_mbps", "requirements", lo=0.0)
    if tb > tc:
        raise ConfigError("requirements.backhaul_mbps", "must not exceed incident_mbps")
    reqs = Requirements(tu * 1e6, tc * 1e6, tb * 1e6)

    inc = c["interference"]["incident_sees_serving_bts"]
    if not isinstance(inc, bool):
        raise ConfigError("interference.incident_sees_serving_bts", "expected true or false")

    m = c["mc"]
    trials = _num(m, "trials", "mc", integer=True, lo=1)
    batch = _num(m, "batch", "mc", integer=True, lo=1, optional=True)
    if batch is not None and trials % batch:
        raise ConfigError("mc.batch", "must divide mc.trials")
    mc = McConfig(trials, _num(m, "seed", "mc", integer=True, lo=0, hi=2**64 - 1), batch)

    fl = c["fleet"]
    fleet = FleetInputs(
        _num(fl, "conv_side", "fleet", positive=True),
        _num(fl, "prop_side", "fleet", positive=True),
        _num(fl, "fire_stations", "fleet", integer=True, lo=1),
        _num(fl, "stationary_baseline", "fleet", integer=True, lo=1),
        _num(fl, "dispatch_time_factor", "fleet", positive=True),
    )
    if fleet.prop_side < fleet.conv_side:
        raise ConfigError("fleet.prop_side", "must be >= conv_side")

    scenario = Scenario(geometry, powers, radio, tdrs, fdrs, models, inc)
    return ScenarioConfig(scenario, side, sweep, reqs, mc, fleet, tuple(used))


def load_config(path) -> ScenarioConfig:
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}: " if mark else ""
        raise ConfigError("", f"{path}: parse error at {where}{getattr(exc, 'problem', exc)}") from None
    return build_config(raw)
