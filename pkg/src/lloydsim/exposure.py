"""Exposure management: premium-to-capital proxy and regional VaR limits."""

from __future__ import annotations

import math

import numpy as np

from .losses import CatastropheParams, sample_truncated_pareto
from .pricing import QuoteComponentComputed
from .records import QuoteRequest


def premium_em_factor(
    capital: float,
    premiums_written: float,
    reserve_ratio: float,
    max_reserve_to_working: float,
    max_scaling: float,
) -> float | None:
    """Price scaling factor, or ``None`` when the quote must be vetoed.

    ``reserve_ratio * premiums_written`` is held back as reserved capital; the
    rest is working capital. The quote is vetoed if nothing is left to work
    with or if reserved/working exceeds ``max_reserve_to_working``. With
    ``max_scaling > 1`` the price is loaded linearly as the book fills up.
    """
    reserved = reserve_ratio * premiums_written
    working = capital - reserved
    if working <= 0:
        return None
    ratio = reserved / working
    if ratio > max_reserve_to_working:
        return None
    if max_scaling <= 1.0 or max_reserve_to_working == 0:
        return min(max_scaling, 1.0) if max_scaling < 1.0 else 1.0
    return min(max_scaling, 1.0 + (max_scaling - 1.0) * ratio / max_reserve_to_working)


class PremiumExposureManager:
    name = "premium_em"

    def __init__(self, reserve_ratio: float, max_reserve_to_working: float, max_scaling: float, capital: float):
        self.reserve_ratio = reserve_ratio
        self.max_reserve_to_working = max_reserve_to_working
        self.max_scaling = max_scaling
        self.capital = capital
        self.premiums_written = 0.0

    def on_capital_reported(self, capital: float) -> None:
        self.capital = capital

    def on_premium_written(self, amount: float) -> None:
        self.premiums_written += amount

    def reset_year(self) -> None:
        self.premiums_written = 0.0

    def factor(self) -> float | None:
        return premium_em_factor(
            self.capital, self.premiums_written, self.reserve_ratio, self.max_reserve_to_working, self.max_scaling
        )

    def on_quote_requested(self, request: QuoteRequest) -> QuoteComponentComputed:
        f = self.factor()
        return QuoteComponentComputed(
            self.name, request.risk.risk_id, request.role.value, 1.0 if f is None else f, veto=f is None
        )


def quantile_index(exceedance: float, n: int) -> int:
    """0-based index of the ceil((1 - exceedance) * n)-th smallest sample."""
    k = math.ceil((1.0 - exceedance) * n - 1e-9)
    return min(max(k, 1), n) - 1


def var_tail_fractions(
    rng: np.random.Generator,
    params: CatastropheParams,
    num_regions: int,
    exceedance: float,
    samples: int,
) -> np.ndarray:
    """Per-region fraction of exposed limit lost at the (1 - exceedance) quantile.

    Each region gets its own Monte Carlo sample of catastrophe damage, drawn
    from the generator's own law and expressed as a fraction of the risk
    limit (a risk cannot lose more than its limit). The quantile is taken
    over the damage a catastrophe inflicts when it strikes the region.
    """
    if samples < 1000:
        raise ValueError("VaR precompute needs at least 1000 samples")
    if params.mean_events_per_year <= 0:
        return np.zeros(num_regions)
    idx = quantile_index(exceedance, samples)
    out = np.empty(num_regions)
    for r in range(num_regions):
        draws = sample_truncated_pareto(rng, params.pareto_shape, params.minimum, params.cap, size=samples)
        fractions = np.minimum(draws / params.risk_limit, 1.0)
        out[r] = np.partition(fractions, idx)[idx]
    return out


def var_required_capital(safety: float, tail_fraction: float, exposure: float) -> float:
    return safety * tail_fraction * exposure


class VaRExposureManager:
    """Vetoes a quote if the region's projected exposure, stressed at the
    tail fraction and scaled by the safety factor, exceeds capital."""

    name = "var_em"

    def __init__(self, params: CatastropheParams, num_regions: int, exceedance: float, safety: float,
                 samples: int, capital: float):
        self.params = params
        self.num_regions = num_regions
        self.exceedance = exceedance
        self.safety = safety
        self.samples = samples
        self.capital = capital
        self.tail_fractions = np.zeros(num_regions)
        self.exposure = [0.0] * num_regions

    def precompute(self, rng: np.random.Generator) -> np.ndarray:
        self.tail_fractions = var_tail_fractions(rng, self.params, self.num_regions, self.exceedance, self.samples)
        return self.tail_fractions

    def on_capital_reported(self, capital: float) -> None:
        self.capital = capital

    def add_exposure(self, region: int, amount: float) -> None:
        self.exposure[region] += amount

    def remove_exposure(self, region: int, amount: float) -> None:
        self.exposure[region] = max(0.0, self.exposure[region] - amount)

    def allows(self, region: int, limit: float, line: float) -> bool:
        projected = self.exposure[region] + limit * line
        return var_required_capital(self.safety, float(self.tail_fractions[region]), projected) <= self.capital

    def on_quote_requested(self, request: QuoteRequest, line: float) -> QuoteComponentComputed:
        risk = request.risk
        ok = self.allows(risk.peril_region, risk.limit, line)
        return QuoteComponentComputed(self.name, risk.risk_id, request.role.value, 1.0, veto=not ok)
