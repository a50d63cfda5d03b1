"""Closed-form downlink throughputs under Rayleigh fading and round-robin scheduling.

The generic result: a BTS serving the UEs of a set Z on bandwidth W_o with
flat PSD S_o delivers

    R = W_o log2(1+g) / |Z| * sum_u exp(-eta g / (g_uo S_o)) prod_a (g_ua S_a g / (g_uo S_o) + 1)^-1

where g is the SINR threshold. Each architecture below is that result with
particular bandwidths, PSDs and interferer sets plugged in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

from .channel import (
    ACCESS_MODEL,
    BACKHAUL_MODEL,
    LinkGain,
    PathLossModel,
    PowerConfig,
    db_to_linear,
    path_gain,
    routine_tx_power,
)
from .geometry import CellLayout, Point, distance

REL_TOL = 1e-9


class Architecture(Enum):
    CONVENTIONAL = "conv"
    TDRS = "tdrs"
    FDRS = "fdrs"

    @property
    def is_proposed(self) -> bool:
        return self is not Architecture.CONVENTIONAL


class SharingMode(Enum):
    TDRS = "tdrs"
    FDRS = "fdrs"


@dataclass(frozen=True)
class RadioConfig:
    """SINR threshold (linear) and the resource-block grid."""

    gamma: float = 10.0
    resource_block_hz: float = 12 * 15e3
    n_resource_blocks: int = 50

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.n_resource_blocks < 1 or not self.resource_block_hz > 0:
            raise ValueError("resource grid must be non-empty")

    @classmethod
    def from_db(cls, gamma_db: float = 10.0, n_resource_blocks: int = 50,
                subcarriers_per_block: int = 12, subcarrier_spacing_hz: float = 15e3) -> RadioConfig:
        return cls(db_to_linear(gamma_db), subcarriers_per_block * subcarrier_spacing_hz,
                   n_resource_blocks)

    @property
    def spectral_eff_bits(self) -> float:
        return math.log2(1.0 + self.gamma)

    @property
    def total_bw_hz(self) -> float:
        return self.n_resource_blocks * self.resource_block_hz


@dataclass(frozen=True)
class ResourceSharing:
    mode: SharingMode
    total_bw_hz: float
    routine_bw_hz: float
    backhaul_bw_hz: float
    incident_bw_hz: float
    backhaul_time_frac: float
    incident_time_frac: float

    @classmethod
    def tdrs(cls, total_bw_hz: float, routine_bw_hz: float, backhaul_time_frac: float) -> ResourceSharing:
        rest = total_bw_hz - routine_bw_hz
        return cls(SharingMode.TDRS, total_bw_hz, routine_bw_hz, rest, rest,
                   backhaul_time_frac, 1.0 - backhaul_time_frac)

    @classmethod
    def fdrs(cls, total_bw_hz: float, routine_bw_hz: float, backhaul_bw_hz: float) -> ResourceSharing:
        return cls(SharingMode.FDRS, total_bw_hz, routine_bw_hz, backhaul_bw_hz,
                   total_bw_hz - routine_bw_hz - backhaul_bw_hz, 1.0, 1.0)

    @classmethod
    def from_resource_blocks(cls, mode: SharingMode, radio: RadioConfig, routine_rbs: int,
                             backhaul_rbs: int = 0, backhaul_time_frac: float = 1.0) -> ResourceSharing:
        """TDRS ignores ``backhaul_rbs``; FDRS ignores ``backhaul_time_frac``."""
        rb = radio.resource_block_hz
        if mode is SharingMode.TDRS:
            return cls.tdrs(radio.total_bw_hz, routine_rbs * rb, backhaul_time_frac)
        return cls.fdrs(radio.total_bw_hz, routine_rbs * rb, backhaul_rbs * rb)


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=REL_TOL, abs_tol=REL_TOL * max(1.0, abs(a), abs(b)))


def validate_sharing(sharing: ResourceSharing) -> Optional[str]:
    """Return a description of the first violated constraint, or None if valid."""
    s = sharing
    w, wu, wb, wc = s.total_bw_hz, s.routine_bw_hz, s.backhaul_bw_hz, s.incident_bw_hz
    rho_b, rho_c = s.backhaul_time_frac, s.incident_time_frac
    if not 0 < wu < w:
        return "0 < W_u < W required (routine_bw_hz)"
    if not (wb > 0 and wc > 0):
        return "W_b > 0 and W_c > 0 required"
    for name, frac in (("backhaul_time_frac", rho_b), ("incident_time_frac", rho_c)):
        if not 0 <= frac <= 1:
            return f"{name} must lie in [0, 1]"
    if s.mode is SharingMode.TDRS:
        if not (_close(wb, w - wu) and _close(wc, w - wu)):
            return "TDRS requires W_b = W_c = W - W_u"
        if not _close(rho_b + rho_c, 1.0):
            return "TDRS requires rho_b + rho_c = 1"
    else:
        if not _close(wb + wc, w - wu):
            return "FDRS requires W_b + W_c = W - W_u"
        if not (_close(rho_b, 1.0) and _close(rho_c, 1.0)):
            return "FDRS requires rho_b = rho_c = 1"
    return None


def _check_sharing(sharing: ResourceSharing, radio: Optional[RadioConfig] = None):
    problem = validate_sharing(sharing)
    if problem:
        raise ValueError(f"invalid resource sharing: {problem}")
    if radio is not None and not _close(sharing.total_bw_hz, radio.total_bw_hz):
        raise ValueError("resource sharing total bandwidth differs from the radio grid")


def success_probability(serving: LinkGain, interferers: Iterable[LinkGain],
                        noise_psd: float, gamma: float) -> float:
    """P{SINR > gamma} with unit-mean exponential fading on every link."""
    signal = serving.received_psd
    if not signal > 0:
        raise ValueError("serving link must have positive received PSD")
    p = math.exp(-noise_psd * gamma / signal)
    for a in interferers:
        p /= (a.received_psd / signal) * gamma + 1.0
    return p


def aggregate_throughput(bw_hz: float, time_frac: float, ues: Sequence[float],
                         n_sharing: int, gamma: float) -> float:
    """Round-robin aggregate rate (bit/s) of the UEs whose success probabilities are given.

    ``n_sharing`` is the number of UEs taking turns on the resource, which
    may exceed ``len(ues)`` when only part of the served set is summed.
    """
    if not ues:
        raise ValueError("aggregate_throughput needs at least one UE")
    if n_sharing < len(ues):
        raise ValueError("n_sharing cannot be smaller than the number of UEs summed")
    if not bw_hz > 0:
        raise ValueError("bandwidth must be positive")
    return time_frac * bw_hz * math.log2(1.0 + gamma) * math.fsum(ues) / n_sharing


@dataclass(frozen=True)
class LinkSet:
    """The serving link of one receiver and the links interfering with it."""

    serving: LinkGain
    interferers: tuple[LinkGain, ...] = ()


@dataclass(frozen=True)
class RateSpec:
    """Everything needed to evaluate one aggregate rate, analytically or by sampling."""

    name: str
    bw_hz: float
    time_frac: float
    n_sharing: int
    noise_psd: float
    gamma: float
    links: tuple[LinkSet, ...]

    def probabilities(self) -> list[float]:
        return [success_probability(ls.serving, ls.interferers, self.noise_psd, self.gamma)
                for ls in self.links]

    def rate_per_success(self) -> float:
        """bit/s contributed by one unit of summed success probability."""
        return self.time_frac * self.bw_hz * math.log2(1.0 + self.gamma) / self.n_sharing

    def closed_form(self) -> float:
        if not self.links:
            return 0.0
        return aggregate_throughput(self.bw_hz, self.time_frac, self.probabilities(),
                                    self.n_sharing, self.gamma)


@dataclass(frozen=True)
class ThroughputReport:
    architecture: Architecture
    routine_bps: float
    incident_bps: float
    backhaul_bps: Optional[float] = None
    config: Optional[ResourceSharing] = None

    def __post_init__(self):
        if (self.backhaul_bps is not None) != self.architecture.is_proposed:
            raise ValueError("backhaul rate is reported for the proposed architectures only")

    def rates(self) -> dict[str, float]:
        out = {"routine": self.routine_bps, "incident": self.incident_bps}
        if self.backhaul_bps is not None:
            out["backhaul"] = self.backhaul_bps
        return out


@dataclass(frozen=True)
class PathLossModels:
    backhaul: PathLossModel = BACKHAUL_MODEL
    access: PathLossModel = ACCESS_MODEL


def _links(rx: Point, server: Point, s_o: float, sources: Sequence[Point], s_a: float,
           model: PathLossModel) -> LinkSet:
    serving = LinkGain(path_gain(model, distance(rx, server)), s_o)
    interf = tuple(LinkGain(path_gain(model, distance(rx, a)), s_a) for a in sources)
    return LinkSet(serving, interf)


def conventional_specs(layout: CellLayout, powers: PowerConfig, radio: RadioConfig,
                       models: PathLossModels = PathLossModels()) -> dict[str, RateSpec]:
    w = radio.total_bw_hz
    psd = powers.stationary_w / w
    o = layout.serving_bts
    n = len(layout.routine_ues) + len(layout.incident.ues)

    def spec(name, ues):
        links = tuple(_links(u, o, psd, layout.interferer_bts, psd, models.access) for u in ues)
        return RateSpec(name, w, 1.0, n, powers.noise_psd_w_hz, radio.gamma, links)

    return {"routine": spec("routine", layout.routine_ues),
            "incident": spec("incident", layout.incident.ues)}


def proposed_specs(layout: CellLayout, powers: PowerConfig, sharing: ResourceSharing,
                   radio: RadioConfig, models: PathLossModels = PathLossModels(),
                   incident_sees_serving_bts: bool = True) -> dict[str, RateSpec]:
    """Rate specs for routine, incident and backhaul links of the proposed architecture.

    Stationary BTSs are silent on backhaul resources, so the backhaul has no
    interferers. Routine UEs are not interfered by the mobile BTS (disjoint
    resources). Incident UEs see every stationary BTS, the serving one
    included unless ``incident_sees_serving_bts`` is false.
    """
    _check_sharing(sharing, radio)
    s = sharing
    eta = powers.noise_psd_w_hz
    o, mob = layout.serving_bts, layout.mobile_bts
    if s.mode is SharingMode.TDRS:
        s_a = powers.stationary_w / s.total_bw_hz
    else:
        s_a = powers.stationary_w / (s.total_bw_hz - s.backhaul_bw_hz)

    s_u = routine_tx_power(powers) / s.routine_bw_hz
    routine = tuple(_links(u, o, s_u, layout.interferer_bts, s_a, models.access)
                    for u in layout.routine_ues)

    s_c = powers.mobile_w / s.incident_bw_hz
    sources = layout.stationary_bts if incident_sees_serving_bts else layout.interferer_bts
    incident = tuple(_links(c, mob, s_c, sources, s_a, models.access)
                     for c in layout.incident.ues)

    if powers.backhaul_dbm is None:
        raise ValueError("the proposed architecture needs a backhaul power")
    s_b = powers.backhaul_w / s.backhaul_bw_hz
    backhaul = (LinkSet(LinkGain(path_gain(models.backhaul, distance(o, mob)), s_b)),)

    return {
        "routine": RateSpec("routine", s.routine_bw_hz, 1.0, len(routine), eta, radio.gamma, routine),
        "incident": RateSpec("incident", s.incident_bw_hz, s.incident_time_frac, len(incident),
                             eta, radio.gamma, incident),
        "backhaul": RateSpec("backhaul", s.backhaul_bw_hz, s.backhaul_time_frac, 1, eta,
                             radio.gamma, backhaul),
    }


def rate_specs(architecture: Architecture, layout: CellLayout, powers: PowerConfig,
               radio: RadioConfig, sharing: Optional[ResourceSharing] = None,
               models: PathLossModels = PathLossModels(),
               incident_sees_serving_bts: bool = True) -> dict[str, RateSpec]:
    if architecture is Architecture.CONVENTIONAL:
        return conventional_specs(layout, powers, radio, models)
    if sharing is None:
        raise ValueError(f"{architecture.value} needs a resource sharing configuration")
    if sharing.mode.value != architecture.value:
        raise ValueError(f"sharing mode {sharing.mode.value} does not match {architecture.value}")
    return proposed_specs(layout, powers, sharing, radio, models, incident_sees_serving_bts)


def conventional_throughputs(layout: CellLayout, powers: PowerConfig, radio: RadioConfig,
                             models: PathLossModels = PathLossModels()) -> ThroughputReport:
    specs = conventional_specs(layout, powers, radio, models)
    return ThroughputReport(Architecture.CONVENTIONAL, specs["routine"].closed_form(),
                            specs["incident"].closed_form())


def proposed_backhaul_throughput(layout: CellLayout, powers: PowerConfig, sharing: ResourceSharing,
                                 radio: RadioConfig, models: PathLossModels = PathLossModels()) -> float:
    _check_sharing(sharing, radio)
    g = path_gain(models.backhaul, distance(layout.serving_bts, layout.mobile_bts))
    wb = sharing.backhaul_bw_hz
    snr_term = powers.noise_psd_w_hz * wb * radio.gamma / (g * powers.backhaul_w)
    return sharing.backhaul_time_frac * wb * radio.spectral_eff_bits * math.exp(-snr_term)


def proposed_access_throughputs(layout: CellLayout, powers: PowerConfig, sharing: ResourceSharing,
                                radio: RadioConfig, models: PathLossModels = PathLossModels(),
                                incident_sees_serving_bts: bool = True) -> ThroughputReport:
    specs = proposed_specs(layout, powers, sharing, radio, models, incident_sees_serving_bts)
    arch = Architecture(sharing.mode.value)
    return ThroughputReport(arch, specs["routine"].closed_form(), specs["incident"].closed_form(),
                            proposed_backhaul_throughput(layout, powers, sharing, radio, models),
                            sharing)


def evaluate(architecture: Architecture, layout: CellLayout, powers: PowerConfig,
             radio: RadioConfig, sharing: Optional[ResourceSharing] = None,
             models: PathLossModels = PathLossModels(),
             incident_sees_serving_bts: bool = True) -> ThroughputReport:
    if architecture is Architecture.CONVENTIONAL:
        return conventional_throughputs(layout, powers, radio, models)
    if sharing is None or sharing.mode.value != architecture.value:
        raise ValueError(f"{architecture.value} needs a matching resource sharing configuration")
    return proposed_access_throughputs(layout, powers, sharing, radio, models,
                                       incident_sees_serving_bts)
