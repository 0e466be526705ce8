"""Market-wide loss statistics fed back into actuarial pricing."""

from __future__ import annotations

from collections import defaultdict

from .config import ScenarioConfig
from .engine import DAYS_PER_YEAR, Event, EventKind, Process
from .records import LossStatistics


def split_exposure(start_day: int, end_day: int) -> dict[int, float]:
    """Policy-years of cover over ``[start_day, end_day)`` keyed by 0-based year."""
    out: dict[int, float] = {}
    day = start_day
    while day < end_day:
        year = day // DAYS_PER_YEAR
        stop = min(end_day, (year + 1) * DAYS_PER_YEAR)
        out[year] = out.get(year, 0.0) + (stop - day) / DAYS_PER_YEAR
        day = stop
    return out


class IndustryStatistics(Process):
    """Yearly claim frequency per policy-year and mean claim size.

    Every physical loss counts once, at 100% of the risk, however many
    syndicates share it. Empty denominators carry the previous estimate.
    """

    subscriptions = (
        EventKind.RISK_BROADCASTED,
        EventKind.LEAD_QUOTE_ACCEPTED,
        EventKind.CLAIM_RECEIVED,
        EventKind.YEAR,
    )

    def __init__(self, cfg: ScenarioConfig):
        self.frequency = cfg.initial_industry_claim_frequency
        self.severity = cfg.initial_industry_claim_severity
        self.risks_entered = 0
        self.policies_bound = 0
        self.claims_count = 0
        self.total_claims = 0.0
        self.exposure: dict[int, float] = defaultdict(float)
        self._seen: set[int] = set()
        self.reports: list[LossStatistics] = []

    def on_risk_broadcasted(self, event: Event) -> None:
        self.risks_entered += 1

    def on_lead_quote_accepted(self, event: Event) -> None:
        acc = event.payload
        self.policies_bound += 1
        for year, years in split_exposure(acc.day, acc.risk.expiry_day).items():
            self.exposure[year] += years

    def on_claim_received(self, event: Event) -> None:
        claim = event.payload
        if claim.loss_id in self._seen:
            return
        self._seen.add(claim.loss_id)
        self.claims_count += 1
        self.total_claims += claim.full_loss

    def close_year(self, year: int) -> LossStatistics:
        """Statistics for 1-based ``year`` (days ``[360(year-1), 360 year)``)."""
        exposed = self.exposure.pop(year - 1, 0.0)
        count = self.claims_count
        if exposed > 0:
            self.frequency = count / exposed
        if count > 0:
            self.severity = self.total_claims / count
        stats = LossStatistics(year, self.frequency, self.severity, count, exposed)
        self.reports.append(stats)
        self.claims_count = 0
        self.total_claims = 0.0
        self._seen.clear()
        return stats

    def on_year(self, event: Event) -> None:
        stats = self.close_year(event.day // DAYS_PER_YEAR)
        self.sim.emit(EventKind.INDUSTRY_LOSS_STATISTICS_REPORTED, stats)
