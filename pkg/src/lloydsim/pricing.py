"""Actuarial and underwriting quote components.

The actuarial price blends the syndicate's own loss experience with the
industry's, then adds a volatility loading:

    expected = z * own_mean + (1 - z) * industry_frequency * industry_severity
    price    = expected + alpha * own_std

The underwriter scales that price by ``exp(m)`` where ``m`` is a log markup
smoothed over time. All costs are per risk-year at a 100% share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .records import Claim, LossStatistics, PricingStatistics, QuoteRequest


@dataclass(frozen=True, slots=True)
class QuoteComponentComputed:
    """One sub-process's contribution to a pending quote."""

    component: str
    risk_id: int
    role: str
    value: float
    veto: bool = False


def expected_claim_cost(z: float, own_mean: float, industry_frequency: float, industry_severity: float) -> float:
    return z * own_mean + (1.0 - z) * industry_frequency * industry_severity


def actuarial_price(expected_cost: float, volatility_weight: float, claim_std: float) -> float:
    return expected_cost + volatility_weight * claim_std


class ExponentialAverage:
    """EWMA of a series plus an EWMA of squared deviations (for the std)."""

    __slots__ = ("weight", "mean", "var")

    def __init__(self, weight: float, mean: float, var: float = 0.0):
        if not 0.0 < weight <= 1.0:
            raise ValueError("recency weight must lie in (0, 1]")
        self.weight = weight
        self.mean = mean
        self.var = var

    def update(self, x: float) -> float:
        w = self.weight
        delta = x - self.mean
        self.mean += w * delta
        self.var = (1.0 - w) * (self.var + w * delta * delta)
        return self.mean

    @property
    def std(self) -> float:
        return math.sqrt(self.var)


class ActuarialModel:
    """Actuarial sub-process.

    Claims are de-shared to 100% of the risk and accumulated over the year;
    at the year end the year's cost per policy-year becomes one observation
    of the experience average. Until claims or industry data arrive the
    model prices from the configured prior.
    """

    name = "actuarial"

    def __init__(
        self,
        internal_weight: float,
        recency_weight: float,
        volatility_weight: float,
        prior_frequency: float,
        prior_severity: float,
    ):
        self.z = internal_weight
        self.alpha = volatility_weight
        self.experience = ExponentialAverage(recency_weight, prior_frequency * prior_severity)
        self.industry_frequency = prior_frequency
        self.industry_severity = prior_severity
        self.pricing: PricingStatistics | None = None
        self.year_losses = 0.0
        self.year_claims = 0

    @property
    def own_mean(self) -> float:
        return self.experience.mean

    @property
    def own_std(self) -> float:
        return self.experience.std

    def expected_cost(self) -> float:
        return expected_claim_cost(self.z, self.experience.mean, self.industry_frequency, self.industry_severity)

    def price(self) -> float:
        return actuarial_price(self.expected_cost(), self.alpha, self.experience.std)

    def on_quote_requested(self, request: QuoteRequest) -> QuoteComponentComputed:
        return QuoteComponentComputed(self.name, request.risk.risk_id, request.role.value, self.price())

    def on_claim_received(self, claim: Claim) -> None:
        self.year_losses += claim.full_loss
        self.year_claims += 1

    def observe(self, annual_cost: float) -> float:
        return self.experience.update(annual_cost)

    def close_year(self, exposure_years: float) -> None:
        if exposure_years > 0:
            self.observe(self.year_losses / exposure_years)
        self.year_losses = 0.0
        self.year_claims = 0

    def on_industry_loss_statistics(self, stats: LossStatistics) -> None:
        self.industry_frequency = stats.claim_frequency
        self.industry_severity = stats.claim_severity

    def on_industry_pricing_statistics(self, stats: PricingStatistics) -> None:
        self.pricing = stats


class UnderwritingModel:
    """Underwriting sub-process: multiplies the actuarial price by ``exp(m)``.

    The markup follows ``m <- (1 - w) m + w * eta * (win_rate - target)``
    once a year. Disabled, it always contributes a factor of 1.
    """

    name = "underwriting"

    def __init__(self, recency_weight: float, enabled: bool, sensitivity: float = 1.0, target_win_rate: float = 0.5):
        self.weight = recency_weight
        self.enabled = enabled
        self.sensitivity = sensitivity
        self.target_win_rate = target_win_rate
        self.m = 0.0

    def factor(self) -> float:
        return math.exp(self.m) if self.enabled else 1.0

    def update(self, win_rate: float) -> float:
        if self.enabled:
            innovation = self.sensitivity * (win_rate - self.target_win_rate)
            self.m = (1.0 - self.weight) * self.m + self.weight * innovation
        return self.m

    def on_quote_requested(self, request: QuoteRequest) -> QuoteComponentComputed:
        return QuoteComponentComputed(self.name, request.risk.risk_id, request.role.value, self.factor())
