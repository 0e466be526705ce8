"""Central risk repository: quotes in, policies and claims out."""

from __future__ import annotations

from dataclasses import dataclass

from .config import ScenarioConfig
from .engine import DAYS_PER_MONTH, Event, EventKind, Process
from .losses import allocate_regional_loss
from .records import (
    Acceptance,
    AttritionalLoss,
    CatastropheLoss,
    Claim,
    LossSource,
    Policy,
    PricingStatistics,
    Quote,
    Risk,
    Role,
)


def pick_lead(quotes: list[Quote]) -> Quote | None:
    """Cheapest quote; equal prices go to the lowest syndicate id."""
    if not quotes:
        return None
    return min(quotes, key=lambda q: (q.price, q.syndicate_id))


def sign_down(lead_line: float, requested: list[float]) -> list[float]:
    """Follow lines after proportional sign-down to the capacity left by the lead."""
    remaining = max(0.0, 1.0 - lead_line)
    total = sum(requested)
    if total <= remaining or total == 0:
        return list(requested)
    scale = remaining / total
    return [r * scale for r in requested]


@dataclass
class CatastropheRecord:
    cat_id: int
    day: int
    peril_region: int
    severity: float
    exposed_limit: float
    uninsured_loss: float
    insured_loss: float
    claims_paid: float
    policies_hit: int


class RiskRepository(Process):
    """Holds open risks, collects quotes, binds policies and cascades losses.

    Parameters
    ----------
    cfg : ScenarioConfig
    syndicate_pids : dict
        Syndicate id to process id, used to address acceptances.
    """

    subscriptions = (
        EventKind.RISK_BROADCASTED,
        EventKind.LEAD_QUOTE_OFFERED,
        EventKind.LEAD_QUOTE_SELECTION_DEADLINE_REACHED,
        EventKind.FOLLOW_QUOTE_OFFERED,
        EventKind.FOLLOW_QUOTE_SELECTION_DEADLINE_REACHED,
        EventKind.ATTRITIONAL_LOSS_OCCURRED,
        EventKind.CATASTROPHE_LOSS_OCCURRED,
        EventKind.POLICY_EXPIRED,
        EventKind.SYNDICATE_BANKRUPTED,
        EventKind.MONTH,
    )

    def __init__(self, cfg: ScenarioConfig, syndicate_pids: dict[int, int]):
        self.cfg = cfg
        self.syndicate_pids = dict(syndicate_pids)
        self.dead: set[int] = set()
        self.open_risks: dict[int, Risk] = {}
        self.lead_quotes: dict[int, list[Quote]] = {}
        self.follow_quotes: dict[int, list[Quote]] = {}
        self.policies: dict[int, Policy] = {}
        self.by_region: list[dict[int, Policy]] = [{} for _ in range(cfg.number_of_peril_regions)]
        self.line_totals: list[float] = []
        self.catastrophes: list[CatastropheRecord] = []
        self.policies_bound = 0
        self.lapsed = 0
        self._month_risks = 0
        self._month_premiums: list[float] = []
        self._month_lines: list[float] = []
        self._last_stats: PricingStatistics | None = None

    # -- quoting ---------------------------------------------------------
    def on_risk_broadcasted(self, event: Event) -> None:
        risk = event.payload
        self.open_risks[risk.risk_id] = risk
        self._month_risks += 1

    def on_lead_quote_offered(self, event: Event) -> None:
        q = event.payload
        if q.risk_id in self.open_risks:
            self.lead_quotes.setdefault(q.risk_id, []).append(q)

    def on_follow_quote_offered(self, event: Event) -> None:
        q = event.payload
        if q.risk_id in self.policies:
            self.follow_quotes.setdefault(q.risk_id, []).append(q)

    def on_lead_quote_selection_deadline_reached(self, event: Event) -> None:
        risk = event.payload
        quotes = [q for q in self.lead_quotes.pop(risk.risk_id, []) if q.syndicate_id not in self.dead]
        self.open_risks.pop(risk.risk_id, None)
        best = pick_lead(quotes)
        if best is None:
            self.lapsed += 1
            return
        day = event.day
        policy = Policy(risk, best.price, day, (best.syndicate_id, best.line_size))
        self.policies[risk.risk_id] = policy
        self.by_region[risk.peril_region][risk.risk_id] = policy
        self.policies_bound += 1
        self._month_premiums.append(best.price)
        sim = self.sim
        sim.emit(
            EventKind.LEAD_QUOTE_ACCEPTED,
            Acceptance(risk, best.syndicate_id, Role.LEAD, best.price, best.line_size, day),
        )
        sim.schedule(EventKind.POLICY_EXPIRED, risk.expiry_day, policy)

    def on_follow_quote_selection_deadline_reached(self, event: Event) -> None:
        risk = event.payload
        quotes = self.follow_quotes.pop(risk.risk_id, [])
        policy = self.policies.get(risk.risk_id)
        if policy is None:
            return
        quotes = [q for q in quotes if q.syndicate_id not in self.dead]
        if quotes:
            quotes.sort(key=lambda q: q.syndicate_id)
            signed = sign_down(policy.lead[1], [q.line_size for q in quotes])
            for q, line in zip(quotes, signed):
                if line <= 0:
                    continue
                policy.follows.append((q.syndicate_id, line))
                self.sim.emit(
                    EventKind.FOLLOW_QUOTE_ACCEPTED,
                    Acceptance(risk, q.syndicate_id, Role.FOLLOW, policy.premium, line, event.day),
                    target=self.syndicate_pids[q.syndicate_id],
                )
        total = policy.total_line
        self.line_totals.append(total)
        self._month_lines.append(total)

    # -- losses ----------------------------------------------------------
    def _claims(self, policy: Policy, loss_id: int, amount: float, source: LossSource, day: int) -> float:
        capped = min(amount, policy.risk.limit)
        paid = 0.0
        emit = self.sim.emit
        for sid, line in policy.lines():
            if sid in self.dead:
                continue
            claim = capped * line
            paid += claim
            emit(
                EventKind.CLAIM_RECEIVED,
                Claim(loss_id, policy.risk.risk_id, sid, claim, line, capped, source, day),
            )
        return paid

    def on_attritional_loss_occurred(self, event: Event) -> None:
        loss: AttritionalLoss = event.payload
        policy = self.policies.get(loss.risk_id)
        if policy is None or not policy.in_force(event.day):
            return
        self._claims(policy, loss.loss_id, loss.amount, LossSource.ATTRITIONAL, event.day)

    def on_catastrophe_loss_occurred(self, event: Event) -> None:
        cat: CatastropheLoss = event.payload
        day = event.day
        hit = [p for _, p in sorted(self.by_region[cat.peril_region].items()) if p.in_force(day)]
        limits = [p.risk.limit for p in hit]
        shares, uninsured = allocate_regional_loss(cat.severity, limits)
        paid = 0.0
        # Catastrophe loss ids are negative so they never collide with attritional ones.
        for k, (policy, share) in enumerate(zip(hit, shares)):
            loss_id = -(cat.cat_id * 1_000_000 + k + 1)
            paid += self._claims(policy, loss_id, share, LossSource.CATASTROPHE, day)
        self.catastrophes.append(
            CatastropheRecord(cat.cat_id, day, cat.peril_region, cat.severity, float(sum(limits)), uninsured,
                              float(sum(shares)), paid, len(hit))
        )

    def on_policy_expired(self, event: Event) -> None:
        policy = event.payload
        rid = policy.risk.risk_id
        if self.policies.get(rid) is policy:
            del self.policies[rid]
            self.by_region[policy.risk.peril_region].pop(rid, None)

    def on_syndicate_bankrupted(self, event: Event) -> None:
        self.dead.add(event.payload.syndicate_id)

    # -- statistics --------------------------------------------------------
    def monthly_statistics(self, month: int) -> PricingStatistics:
        bound = len(self._month_premiums)
        prev = self._last_stats
        if bound:
            premium = sum(self._month_premiums) / bound
            carried = False
        else:
            premium = prev.mean_bound_premium if prev else 0.0
            carried = prev is not None
        if self._month_lines:
            lines = sum(self._month_lines) / len(self._month_lines)
        else:
            lines = prev.mean_signed_line_total if prev else 0.0
        stats = PricingStatistics(month, self._month_risks, bound, premium, lines, carried)
        self._last_stats = stats
        self._month_risks = 0
        self._month_premiums = []
        self._month_lines = []
        return stats

    def on_month(self, event: Event) -> None:
        stats = self.monthly_statistics(event.day // DAYS_PER_MONTH)
        self.sim.emit(EventKind.INDUSTRY_PRICING_STATISTICS_REPORTED, stats)
