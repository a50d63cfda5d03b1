"""Path loss, power and noise conversions.

Everything downstream works in linear SI units (W, Hz, m); dB and dBm only
appear in the configuration types defined here.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

log = logging.getLogger(__name__)

D_MIN = 1.0  # metres; the log-distance model is not used below this range


@dataclass(frozen=True)
class PathLossModel:
    """Log-distance path loss ``intercept + slope * log10(d)`` in dB."""

    intercept_db: float
    slope_db_per_decade: float

    def __post_init__(self):
        if not self.slope_db_per_decade > 0:
            raise ValueError("slope_db_per_decade must be positive")
        if not self.intercept_db >= 0:
            raise ValueError("intercept_db must be non-negative")

    def loss_db(self, d: float) -> float:
        return self.intercept_db + self.slope_db_per_decade * math.log10(max(d, D_MIN))


# Table values for the two link types
BACKHAUL_MODEL = PathLossModel(34.5, 35.0)
ACCESS_MODEL = PathLossModel(39.3, 37.6)


def path_gain(model: PathLossModel, d: float, return_clamped: bool = False):
    """Linear power gain at distance ``d`` metres.

    Distances below ``D_MIN`` are clamped. With ``return_clamped`` the
    result is a ``(gain, clamped)`` pair.
    """
    clamped = d < D_MIN
    if clamped:
        log.debug("distance %.3g m clamped to %.3g m", d, D_MIN)
    gain = 10.0 ** (-model.loss_db(d) / 10.0)
    if return_clamped:
        return gain, clamped
    return gain


def dbm_to_watts(x: float) -> float:
    return 10.0 ** ((x - 30.0) / 10.0)


def watts_to_dbm(w: float) -> float:
    return 10.0 * math.log10(w) + 30.0


def db_to_linear(x: float) -> float:
    return 10.0 ** (x / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class PowerConfig:
    """Transmit powers and noise level.

    ``backhaul_dbm`` of ``None`` means no power is set aside for a backhaul
    (the stationary BTS keeps its full power for routine UEs).
    """

    stationary_total_dbm: float = 46.0
    backhaul_dbm: Optional[float] = 45.0
    mobile_total_dbm: float = 43.0
    noise_psd_dbm_hz: float = -174.0

    def __post_init__(self):
        vals = [self.stationary_total_dbm, self.mobile_total_dbm, self.noise_psd_dbm_hz]
        if self.backhaul_dbm is not None:
            vals.append(self.backhaul_dbm)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("power levels must be finite")
        if self.backhaul_dbm is not None and not self.backhaul_dbm < self.stationary_total_dbm:
            raise ValueError("backhaul power must be below the stationary BTS total power")

    @property
    def stationary_w(self) -> float:
        return dbm_to_watts(self.stationary_total_dbm)

    @property
    def backhaul_w(self) -> float:
        return 0.0 if self.backhaul_dbm is None else dbm_to_watts(self.backhaul_dbm)

    @property
    def mobile_w(self) -> float:
        return dbm_to_watts(self.mobile_total_dbm)

    @property
    def noise_psd_w_hz(self) -> float:
        return dbm_to_watts(self.noise_psd_dbm_hz)


def routine_tx_power(p: PowerConfig) -> float:
    """Power left for routine UEs once the backhaul share is taken out."""
    if p.backhaul_dbm is not None and p.backhaul_dbm >= p.stationary_total_dbm:
        raise ValueError("backhaul power must be below the stationary BTS total power")
    return p.stationary_w - p.backhaul_w


@dataclass(frozen=True)
class LinkGain:
    """Path gain of a link and the transmit PSD (W/Hz) on it."""

    gain: float
    psd: float

    def __post_init__(self):
        if not 0 < self.gain <= 1:
            raise ValueError(f"gain must lie in (0, 1], got {self.gain}")
        if self.psd < 0:
            raise ValueError(f"psd must be non-negative, got {self.psd}")

    @property
    def received_psd(self) -> float:
        return self.gain * self.psd
