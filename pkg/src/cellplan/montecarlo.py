"""Sampling oracle for the closed-form throughputs.

Fading power gains are drawn per trial and per link as unit-mean
exponentials, the SINR is evaluated directly, and success frequencies are
counted. Each (stream, batch, link) triple owns an independent SFC64
substream spawned from the seed, so results do not depend on the order in
which batches are evaluated or on how many workers evaluate them.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .channel import LinkGain, PowerConfig
from .geometry import CellLayout
from .throughput import (
    Architecture,
    PathLossModels,
    RadioConfig,
    RateSpec,
    ResourceSharing,
    ThroughputReport,
    rate_specs,
)

RATE_STREAM = {"routine": 0, "incident": 1, "backhaul": 2}


@dataclass(frozen=True)
class McConfig:
    trials: int = 100_000
    seed: int = 0
    batch: Optional[int] = None  # trials per substream; None means one batch
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.batch is not None and (self.batch < 1 or self.trials % self.batch):
            raise ValueError("batch must divide trials")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def batch_size(self) -> int:
        return self.batch or self.trials

    @property
    def n_batches(self) -> int:
        return self.trials // self.batch_size


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    trials: int

    def agrees_with(self, value: float, sigma: float = 3.0, null_se: float = 0.0) -> bool:
        """True if ``value`` is within ``sigma`` standard errors of the estimate.

        The larger of the sample standard error and ``null_se`` (the
        standard error implied by ``value`` itself) is used, so an estimate
        that happens to have zero sample variance is still judged fairly.
        """
        se = max(self.std_error, null_se)
        return abs(self.mean - value) <= sigma * se


def _fading(seed: int, key: tuple[int, ...], n: int) -> np.ndarray:
    """Unit-mean exponential draws by inverse CDF on a dedicated substream."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=key)
    h = np.random.Generator(np.random.SFC64(ss)).random(n)
    np.negative(h, out=h)
    np.log1p(h, out=h)
    np.negative(h, out=h)
    return h


def count_successes(serving: LinkGain, interferers: Sequence[LinkGain], noise_psd: float,
                    gamma: float, seed: int, key: tuple[int, ...], batch_index: int,
                    n: int) -> int:
    """Number of successes among ``n`` trials of one batch."""
    signal = _fading(seed, key + (batch_index, 0), n)
    signal *= serving.received_psd
    denom = np.full(n, float(noise_psd))
    for j, a in enumerate(interferers, start=1):
        if a.received_psd:
            h = _fading(seed, key + (batch_index, j), n)
            h *= a.received_psd
            denom += h
    # a zero denominator means infinite SINR
    ok = (signal > gamma * denom) | (denom == 0.0)
    return int(np.count_nonzero(ok))


def _tally(serving, interferers, noise_psd, gamma, cfg: McConfig, key) -> int:
    b = cfg.batch_size
    return sum(count_successes(serving, interferers, noise_psd, gamma, cfg.seed, key, i, b)
               for i in range(cfg.n_batches))


def binomial_se(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


def mc_success_probability(serving: LinkGain, interferers: Sequence[LinkGain], noise_psd: float,
                           gamma: float, cfg: McConfig = McConfig(),
                           stream: tuple[int, ...] = ()) -> McEstimate:
    if not serving.received_psd > 0 or not gamma > 0:
        raise ValueError("serving link must have positive received PSD and gamma > 0")
    interferers = tuple(interferers)
    if cfg.workers > 1 and cfg.n_batches > 1:
        b = cfg.batch_size
        with ThreadPoolExecutor(cfg.workers) as ex:
            counts = ex.map(lambda i: count_successes(serving, interferers, noise_psd, gamma,
                                                      cfg.seed, stream, i, b),
                            range(cfg.n_batches))
            k = sum(counts)
    else:
        k = _tally(serving, interferers, noise_psd, gamma, cfg, stream)
    p = k / cfg.trials
    return McEstimate(p, binomial_se(p, cfg.trials), cfg.trials)


@dataclass(frozen=True)
class RateEstimate:
    """Sampled aggregate rate next to its closed form."""

    name: str
    estimate: McEstimate
    closed_form: float
    null_se: float
    per_ue: tuple[McEstimate, ...] = field(repr=False, default=())
    per_ue_closed: tuple[float, ...] = field(repr=False, default=())

    @property
    def z(self) -> float:
        se = max(self.estimate.std_error, self.null_se)
        diff = self.estimate.mean - self.closed_form
        if se == 0:
            return 0.0 if diff == 0 else math.copysign(math.inf, diff)
        return diff / se

    def agrees(self, sigma: float = 3.0) -> bool:
        return self.estimate.agrees_with(self.closed_form, sigma, self.null_se)


@dataclass(frozen=True)
class McReport:
    architecture: Architecture
    rates: dict[str, RateEstimate]
    config: Optional[ResourceSharing] = None

    def as_report(self) -> ThroughputReport:
        r = self.rates
        backhaul = r["backhaul"].estimate.mean if "backhaul" in r else None
        return ThroughputReport(self.architecture, r["routine"].estimate.mean,
                                r["incident"].estimate.mean, backhaul, self.config)

    def agrees(self, sigma: float = 3.0) -> bool:
        return all(r.agrees(sigma) for r in self.rates.values())


def mc_rate(spec: RateSpec, cfg: McConfig, stream: int = 0) -> RateEstimate:
    """Aggregate a rate from sampled per-UE success frequencies."""
    n = cfg.trials

    def one(i):
        ls = spec.links[i]
        return _tally(ls.serving, ls.interferers, spec.noise_psd, spec.gamma, cfg, (stream, i))

    idx = range(len(spec.links))
    if cfg.workers > 1 and len(spec.links) > 1:
        with ThreadPoolExecutor(cfg.workers) as ex:
            counts = list(ex.map(one, idx))
    else:
        counts = [one(i) for i in idx]

    if not spec.links:
        return RateEstimate(spec.name, McEstimate(0.0, 0.0, n), 0.0, 0.0)
    per_ue = tuple(McEstimate(k / n, binomial_se(k / n, n), n) for k in counts)
    closed = tuple(spec.probabilities())
    scale = spec.rate_per_success()
    mean = scale * math.fsum(k / n for k in counts)
    se = scale * math.sqrt(math.fsum(e.std_error ** 2 for e in per_ue))
    null_se = scale * math.sqrt(math.fsum(p * (1 - p) for p in closed) / n)
    return RateEstimate(spec.name, McEstimate(mean, se, n), scale * math.fsum(closed), null_se,
                        per_ue, closed)


def mc_report(layout: CellLayout, powers: PowerConfig, sharing: Optional[ResourceSharing],
              radio: RadioConfig, architecture: Architecture, cfg: McConfig = McConfig(),
              models: PathLossModels = PathLossModels(),
              incident_sees_serving_bts: bool = True) -> McReport:
    specs = rate_specs(architecture, layout, powers, radio, sharing, models,
                       incident_sees_serving_bts)
    rates = {name: mc_rate(spec, cfg, RATE_STREAM[name]) for name, spec in specs.items()}
    return McReport(architecture, rates, sharing if architecture.is_proposed else None)
