"""Syndicate process: quotes, books policies, pays claims, vents dividends."""

from __future__ import annotations

from dataclasses import dataclass

from .config import ScenarioConfig
from .engine import DAYS_PER_YEAR, Event, EventKind, Process
from .exposure import PremiumExposureManager, VaRExposureManager
from .industry import split_exposure
from .losses import CatastropheParams
from .pricing import ActuarialModel, QuoteComponentComputed, UnderwritingModel
from .records import Acceptance, Bankruptcy, Claim, Quote, QuoteRequest, Role


def dividend(profit: float, fraction: float) -> float:
    return fraction * profit if profit > 0 else 0.0


def follow_line(default_line: float, own_price: float, lead_price: float) -> float:
    """Line offered to follow: the default scaled by own price over lead price, kept in (0, 1]."""
    strength = own_price / lead_price
    return min(1.0, max(default_line * strength, 1e-12))


@dataclass
class YearFrame:
    year: int
    syndicate_id: int
    capital: float
    premiums_offered_mean: float | None
    premiums_earned: float
    claims_paid: float
    loss_ratio: float | None
    insolvent: bool
    dividend: float
    region_counts: tuple[int, ...]


class Syndicate(Process):
    """One syndicate and its pricing and exposure-management sub-processes.

    Sub-processes report quote components synchronously; a quote is sent
    at the consolidation deadline only if every registered component has
    reported and none vetoed.
    """

    subscriptions = (
        EventKind.SIMULATION_STARTED,
        EventKind.LEAD_QUOTE_REQUESTED,
        EventKind.FOLLOW_QUOTE_REQUESTED,
        EventKind.LEAD_QUOTE_CONSOLIDATION_DEADLINE_REACHED,
        EventKind.FOLLOW_QUOTE_CONSOLIDATION_DEADLINE_REACHED,
        EventKind.LEAD_QUOTE_ACCEPTED,
        EventKind.FOLLOW_QUOTE_ACCEPTED,
        EventKind.CLAIM_RECEIVED,
        EventKind.POLICY_EXPIRED,
        EventKind.YEAR,
        EventKind.INDUSTRY_LOSS_STATISTICS_REPORTED,
        EventKind.INDUSTRY_PRICING_STATISTICS_REPORTED,
    )

    def __init__(self, syndicate_id: int, cfg: ScenarioConfig):
        self.syndicate_id = syndicate_id
        self.cfg = cfg
        self.initial_capital = cfg.capital
        self.capital = cfg.capital
        self.capital_at_year_start = cfg.capital
        self.insolvent = False
        self.failed_day: int | None = None

        self.actuarial = ActuarialModel(
            cfg.internal_experience_weight,
            cfg.loss_experience_recency_weight,
            cfg.volatility_weight,
            cfg.initial_industry_claim_frequency,
            cfg.initial_industry_claim_severity,
        )
        self.underwriting = UnderwritingModel(
            cfg.underwriter_markup_recency_weighting, cfg.markup, cfg.markup_sensitivity, cfg.target_win_rate
        )
        self.premium_em = (
            PremiumExposureManager(
                cfg.premium_reserve_ratio, cfg.minimum_capital_reserving_ratio, cfg.maximum_scaling_factor, cfg.capital
            )
            if cfg.premium_em
            else None
        )
        self.var_em = (
            VaRExposureManager(
                CatastropheParams.from_config(cfg),
                cfg.number_of_peril_regions,
                cfg.var_em_exceedance_probability,
                cfg.var_em_safety_factor,
                cfg.var_em_samples,
                cfg.capital,
            )
            if cfg.var_em
            else None
        )
        self.components = [c for c in (self.actuarial, self.underwriting, self.premium_em, self.var_em) if c]
        self._required = len(self.components)

        self.pending: dict[tuple[int, Role], dict[str, QuoteComponentComputed]] = {}
        self.lead_prices: dict[int, float] = {}
        self.policies: dict[int, tuple[int, float, float]] = {}  # risk_id -> (region, limit, line)
        self.region_counts = [0] * cfg.number_of_peril_regions
        self.exposure_years: dict[int, float] = {}

        self.total_premiums = 0.0
        self.total_claims = 0.0
        self.total_dividends = 0.0
        self._reset_year()

    def _reset_year(self) -> None:
        self.premiums_ytd = 0.0
        self.claims_ytd = 0.0
        self.dividend_ytd = 0.0
        self.offered_sum = 0.0
        self.offered_count = 0
        self.leads_offered_ytd = 0
        self.leads_won_ytd = 0

    # -- capital ---------------------------------------------------------
    def _report_capital(self) -> None:
        if self.premium_em is not None:
            self.premium_em.on_capital_reported(self.capital)
        if self.var_em is not None:
            self.var_em.on_capital_reported(self.capital)

    def on_simulation_started(self, event: Event) -> None:
        if self.var_em is not None:
            self.var_em.precompute(self.sim.stream(f"var_em/{self.syndicate_id}"))

    # -- quoting ---------------------------------------------------------
    def _collect(self, request: QuoteRequest, line: float) -> None:
        if self.insolvent:
            return
        comps: dict[str, QuoteComponentComputed] = {}
        for c in self.components:
            comp = c.on_quote_requested(request, line) if c is self.var_em else c.on_quote_requested(request)
            comps[comp.component] = comp
        self.pending[(request.risk.risk_id, request.role)] = comps

    def on_lead_quote_requested(self, event: Event) -> None:
        self._collect(event.payload, self.cfg.default_lead_quote_line_size)

    def on_follow_quote_requested(self, event: Event) -> None:
        self._collect(event.payload, self.cfg.default_follow_quote_line_size)

    def consolidate(self, comps: dict[str, QuoteComponentComputed] | None) -> float | None:
        """Quoted price from stored components, or ``None`` if withheld."""
        if self.insolvent or comps is None or len(comps) < self._required:
            return None
        if any(c.veto for c in comps.values()):
            return None
        price = comps["actuarial"].value * comps["underwriting"].value
        if "premium_em" in comps:
            price *= comps["premium_em"].value
        return price

    def _offer(self, kind: EventKind, quote: Quote) -> None:
        self.offered_sum += quote.price
        self.offered_count += 1
        self.sim.emit(kind, quote)

    def on_lead_quote_consolidation_deadline_reached(self, event: Event) -> None:
        rid = event.payload.risk_id
        key = (rid, Role.LEAD)
        if key not in self.pending:
            return
        price = self.consolidate(self.pending.pop(key))
        if price is None or price <= 0:
            return
        self.leads_offered_ytd += 1
        self._offer(
            EventKind.LEAD_QUOTE_OFFERED,
            Quote(rid, self.syndicate_id, Role.LEAD, price, self.cfg.default_lead_quote_line_size),
        )

    def on_follow_quote_consolidation_deadline_reached(self, event: Event) -> None:
        rid = event.payload.risk_id
        key = (rid, Role.FOLLOW)
        if key not in self.pending:
            return
        comps = self.pending.pop(key)
        lead_price = self.lead_prices.pop(rid, None)
        price = self.consolidate(comps)
        if price is None or price <= 0 or lead_price is None:
            return
        line = follow_line(self.cfg.default_follow_quote_line_size, price, lead_price)
        self._offer(EventKind.FOLLOW_QUOTE_OFFERED, Quote(rid, self.syndicate_id, Role.FOLLOW, price, line))

    # -- booking ---------------------------------------------------------
    def book(self, acc: Acceptance) -> None:
        if self.insolvent:
            return
        risk = acc.risk
        share = acc.premium * acc.signed_line
        self.capital += share
        self.premiums_ytd += share
        self.total_premiums += share
        self.policies[risk.risk_id] = (risk.peril_region, risk.limit, acc.signed_line)
        self.region_counts[risk.peril_region] += 1
        for year, years in split_exposure(acc.day, risk.expiry_day).items():
            self.exposure_years[year] = self.exposure_years.get(year, 0.0) + years
        if self.premium_em is not None:
            self.premium_em.on_premium_written(share)
        if self.var_em is not None:
            self.var_em.add_exposure(risk.peril_region, risk.limit * acc.signed_line)
        self._report_capital()

    def on_lead_quote_accepted(self, event: Event) -> None:
        acc = event.payload
        if acc.syndicate_id == self.syndicate_id:
            self.leads_won_ytd += 1
            self.book(acc)
        elif (acc.risk.risk_id, Role.FOLLOW) in self.pending:
            self.lead_prices[acc.risk.risk_id] = acc.premium

    def on_follow_quote_accepted(self, event: Event) -> None:
        self.book(event.payload)

    def on_policy_expired(self, event: Event) -> None:
        held = self.policies.pop(event.payload.risk.risk_id, None)
        if held is None:
            return
        region, limit, line = held
        self.region_counts[region] -= 1
        if self.var_em is not None:
            self.var_em.remove_exposure(region, limit * line)

    # -- claims ----------------------------------------------------------
    def on_claim_received(self, event: Event) -> None:
        claim: Claim = event.payload
        if claim.syndicate_id != self.syndicate_id or self.insolvent:
            return
        self.capital -= claim.amount
        self.claims_ytd += claim.amount
        self.total_claims += claim.amount
        self.actuarial.on_claim_received(claim)
        if self.capital < 0:
            self.insolvent = True
            self.failed_day = event.day
            self.pending.clear()
            self.sim.emit(
                EventKind.SYNDICATE_BANKRUPTED,
                Bankruptcy(self.syndicate_id, self.pid, self.capital, event.day),
            )
        else:
            self._report_capital()

    # -- year end --------------------------------------------------------
    def on_year(self, event: Event) -> None:
        if self.insolvent:
            return
        year = event.day // DAYS_PER_YEAR
        d = dividend(self.capital - self.capital_at_year_start, self.cfg.profit_fraction)
        self.capital -= d
        self.dividend_ytd = d
        self.total_dividends += d
        self.actuarial.close_year(self.exposure_years.pop(year - 1, 0.0))
        win_rate = self.leads_won_ytd / self.leads_offered_ytd if self.leads_offered_ytd else 0.0
        self.underwriting.update(win_rate)
        if self.premium_em is not None:
            self.premium_em.reset_year()
        self._report_capital()

    def year_frame(self, year: int) -> YearFrame:
        prem = self.premiums_ytd
        return YearFrame(
            year=year,
            syndicate_id=self.syndicate_id,
            capital=self.capital,
            premiums_offered_mean=self.offered_sum / self.offered_count if self.offered_count else None,
            premiums_earned=prem,
            claims_paid=self.claims_ytd,
            loss_ratio=self.claims_ytd / prem if prem > 0 else None,
            insolvent=self.insolvent,
            dividend=self.dividend_ytd,
            region_counts=tuple(self.region_counts),
        )

    def roll_year(self) -> None:
        self.capital_at_year_start = self.capital
        self._reset_year()

    # -- industry feed ---------------------------------------------------
    def on_industry_loss_statistics_reported(self, event: Event) -> None:
        self.actuarial.on_industry_loss_statistics(event.payload)

    def on_industry_pricing_statistics_reported(self, event: Event) -> None:
        self.actuarial.on_industry_pricing_statistics(event.payload)
