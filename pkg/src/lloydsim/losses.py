"""Attritional and catastrophe loss generation.

Both generators pre-draw their losses and put them straight into the event
queue: attritional losses per risk when the risk is broadcast, catastrophes
for the whole horizon when the simulation starts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import ScenarioConfig
from .engine import DAYS_PER_YEAR, Event, EventKind, Process
from .records import AttritionalLoss, CatastropheLoss


@dataclass(frozen=True)
class AttritionalParams:
    yearly_claim_frequency: float
    cov: float
    mean_severity: float

    def __post_init__(self) -> None:
        if self.yearly_claim_frequency < 0 or self.cov <= 0 or self.mean_severity <= 0:
            raise ValueError("need frequency >= 0, cov > 0 and mean severity > 0")

    @property
    def shape(self) -> float:
        return 1.0 / self.cov**2

    @property
    def scale(self) -> float:
        return self.mean_severity * self.cov**2


@dataclass(frozen=True)
class CatastropheParams:
    mean_events_per_year: float
    pareto_shape: float
    min_damage_fraction: float
    risk_limit: float
    truncation_multiple: float = 10.0

    def __post_init__(self) -> None:
        if self.mean_events_per_year < 0:
            raise ValueError("catastrophe rate must be non-negative")
        if self.pareto_shape <= 1:
            raise ValueError("Pareto shape must exceed 1")
        if not 0 < self.min_damage_fraction <= 1:
            raise ValueError("minimum damage fraction must lie in (0, 1]")

    @property
    def minimum(self) -> float:
        return self.min_damage_fraction * self.risk_limit

    @property
    def cap(self) -> float:
        return self.truncation_multiple * self.minimum

    @classmethod
    def from_config(cls, cfg: ScenarioConfig) -> "CatastropheParams":
        return cls(
            mean_events_per_year=cfg.catastrophe_rate,
            pareto_shape=cfg.pareto_shape,
            min_damage_fraction=cfg.minimum_catastrophe_damage,
            risk_limit=cfg.risk_limit,
            truncation_multiple=cfg.catastrophe_truncation_multiple,
        )


def sample_gamma_severity(rng: np.random.Generator, params: AttritionalParams, size=None):
    return rng.gamma(params.shape, params.scale, size=size)


def sample_truncated_pareto(
    rng: np.random.Generator, shape: float, minimum: float, cap: float = math.inf, size=None
):
    """Inverse-CDF draw from a Pareto(shape, minimum) restricted to [minimum, cap]."""
    u = rng.random(size)
    tail = 0.0 if math.isinf(cap) else (minimum / cap) ** shape
    return minimum * (1.0 - u * (1.0 - tail)) ** (-1.0 / shape)


def pareto_mean(shape: float, minimum: float) -> float:
    return minimum * shape / (shape - 1.0)


def allocate_regional_loss(total_loss: float, limits: Sequence[float]) -> tuple[list[float], float]:
    """Split a regional loss over risks in proportion to their limits.

    Each share is capped at its risk's limit. Returns the per-risk losses and
    the uninsured remainder (``total_loss`` minus what was allocated).
    """
    if total_loss < 0:
        raise ValueError("loss must be non-negative")
    exposed = float(sum(limits))
    if not limits or exposed <= 0:
        return [], float(total_loss)
    shares = [min(total_loss * lim / exposed, lim) for lim in limits]
    return shares, float(total_loss - sum(shares))


class AttritionalLossGenerator(Process):
    subscriptions = (EventKind.RISK_BROADCASTED,)

    def __init__(self, params: AttritionalParams):
        self.params = params
        self._next_id = 0

    def bind(self, sim, pid):
        super().bind(sim, pid)
        self.rng = sim.stream("attritional")

    def generate(self, risk) -> list[AttritionalLoss]:
        p = self.params
        n = int(self.rng.poisson(p.yearly_claim_frequency)) if p.yearly_claim_frequency > 0 else 0
        if n == 0:
            return []
        days = self.rng.integers(risk.inception_day, risk.expiry_day, size=n)
        amounts = sample_gamma_severity(self.rng, p, size=n)
        out = []
        for day, amount in sorted(zip(days.tolist(), amounts.tolist())):
            out.append(AttritionalLoss(self._next_id, risk.risk_id, day, amount))
            self._next_id += 1
        return out

    def on_risk_broadcasted(self, event: Event) -> None:
        for loss in self.generate(event.payload):
            self.sim.schedule(EventKind.ATTRITIONAL_LOSS_OCCURRED, loss.day, loss)


class CatastropheLossGenerator(Process):
    subscriptions = (EventKind.SIMULATION_STARTED,)

    def __init__(self, params: CatastropheParams, num_regions: int, horizon_years: int):
        self.params = params
        self.num_regions = num_regions
        self.horizon_years = horizon_years
        self.generated: list[CatastropheLoss] = []

    def bind(self, sim, pid):
        super().bind(sim, pid)
        self.rng = sim.stream("catastrophe")

    def generate(self) -> list[CatastropheLoss]:
        p = self.params
        lam = p.mean_events_per_year * self.horizon_years
        n = int(self.rng.poisson(lam)) if lam > 0 else 0
        if n == 0:
            return []
        horizon_days = self.horizon_years * DAYS_PER_YEAR
        days = self.rng.integers(0, horizon_days, size=n)
        regions = self.rng.integers(0, self.num_regions, size=n)
        severity = sample_truncated_pareto(self.rng, p.pareto_shape, p.minimum, p.cap, size=n)
        order = np.lexsort((regions, days))
        return [
            CatastropheLoss(i, int(days[j]), int(regions[j]), float(severity[j]))
            for i, j in enumerate(order)
        ]

    def on_simulation_started(self, event: Event) -> None:
        self.generated = self.generate()
        for cat in self.generated:
            self.sim.schedule(EventKind.CATASTROPHE_LOSS_OCCURRED, cat.day, cat)
