"""Brokers bring risks to market and set the quote deadlines."""

from __future__ import annotations

from .config import ScenarioConfig
from .engine import DAYS_PER_YEAR, Event, EventKind, Process
from .records import QuoteDeadlines, Risk


class RiskIds:
    """Market-wide risk numbering shared by every broker."""

    def __init__(self) -> None:
        self.next = 0

    def take(self) -> int:
        rid = self.next
        self.next += 1
        return rid


def deadlines_for(day: int, cfg: ScenarioConfig) -> QuoteDeadlines:
    return QuoteDeadlines(
        day + cfg.lead_consolidation_offset,
        day + cfg.lead_selection_offset,
        day + cfg.follow_consolidation_offset,
        day + cfg.follow_selection_offset,
    )


class Broker(Process):
    subscriptions = (EventKind.DAY,)

    def __init__(self, broker_id: int, cfg: ScenarioConfig, ids: RiskIds):
        self.broker_id = broker_id
        self.cfg = cfg
        self.ids = ids
        self._counts: list[int] = []
        self._block_start = -1

    def bind(self, sim, pid):
        super().bind(sim, pid)
        self.rng = sim.stream(f"broker/{self.broker_id}")

    def risks_on(self, day: int) -> int:
        # Daily Poisson counts are drawn a year at a time; same law, fewer calls.
        block = day - day % DAYS_PER_YEAR
        if block != self._block_start:
            self._block_start = block
            self._counts = self.rng.poisson(self.cfg.risks_per_day, DAYS_PER_YEAR).tolist()
        return self._counts[day - block]

    def new_risk(self, day: int) -> Risk:
        cfg = self.cfg
        return Risk(
            risk_id=self.ids.take(),
            broker_id=self.broker_id,
            inception_day=day,
            expiry_day=day + DAYS_PER_YEAR,
            limit=cfg.risk_limit,
            peril_region=int(self.rng.integers(cfg.number_of_peril_regions)),
        )

    def on_day(self, event: Event) -> None:
        day = event.day
        n = self.risks_on(day)
        if not n:
            return
        sim = self.sim
        for _ in range(n):
            risk = self.new_risk(day)
            sim.emit(EventKind.RISK_BROADCASTED, risk)
            d = deadlines_for(day, self.cfg)
            sim.schedule(EventKind.LEAD_QUOTE_CONSOLIDATION_DEADLINE_REACHED, d.lead_consolidation_day, risk)
            sim.schedule(EventKind.LEAD_QUOTE_SELECTION_DEADLINE_REACHED, d.lead_selection_day, risk)
            sim.schedule(EventKind.FOLLOW_QUOTE_CONSOLIDATION_DEADLINE_REACHED, d.follow_consolidation_day, risk)
            sim.schedule(EventKind.FOLLOW_QUOTE_SELECTION_DEADLINE_REACHED, d.follow_selection_day, risk)
