"""Payload records carried by events."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Role(str, Enum):
    LEAD = "lead"
    FOLLOW = "follow"


class LossSource(str, Enum):
    ATTRITIONAL = "attritional"
    CATASTROPHE = "catastrophe"


@dataclass(frozen=True, slots=True)
class Risk:
    risk_id: int
    broker_id: int
    inception_day: int
    expiry_day: int
    limit: float
    peril_region: int

    def __post_init__(self) -> None:
        if self.limit <= 0:
            raise ValueError("risk limit must be positive")
        if self.expiry_day <= self.inception_day:
            raise ValueError("expiry must follow inception")

    def summary(self) -> str:
        return f"risk={self.risk_id} broker={self.broker_id} region={self.peril_region}"


@dataclass(frozen=True, slots=True)
class QuoteDeadlines:
    lead_consolidation_day: int
    lead_selection_day: int
    follow_consolidation_day: int
    follow_selection_day: int

    def __post_init__(self) -> None:
        days = (
            self.lead_consolidation_day,
            self.lead_selection_day,
            self.follow_consolidation_day,
            self.follow_selection_day,
        )
        if any(b <= a for a, b in zip(days, days[1:])):
            raise ValueError(f"deadlines must be strictly increasing: {days}")


@dataclass(frozen=True, slots=True)
class QuoteRequest:
    risk: Risk
    syndicate_id: int
    role: Role

    def summary(self) -> str:
        return f"risk={self.risk.risk_id} syndicate={self.syndicate_id} role={self.role.value}"


@dataclass(frozen=True, slots=True)
class Quote:
    risk_id: int
    syndicate_id: int
    role: Role
    price: float
    line_size: float

    def __post_init__(self) -> None:
        if not 0 < self.line_size <= 1:
            raise ValueError(f"line size {self.line_size} outside (0, 1]")
        if self.role is Role.LEAD and self.price <= 0:
            raise ValueError("lead quotes need a positive price")

    def summary(self) -> str:
        return (
            f"risk={self.risk_id} syndicate={self.syndicate_id} role={self.role.value} "
            f"price={self.price:.2f} line={self.line_size:.6f}"
        )


@dataclass(frozen=True, slots=True)
class Acceptance:
    """A signed line on a bound policy (lead or follow)."""

    risk: Risk
    syndicate_id: int
    role: Role
    premium: float
    signed_line: float
    day: int

    def summary(self) -> str:
        return (
            f"risk={self.risk.risk_id} syndicate={self.syndicate_id} role={self.role.value} "
            f"premium={self.premium:.2f} line={self.signed_line:.6f}"
        )


@dataclass(slots=True)
class Policy:
    risk: Risk
    premium: float
    inception_day: int
    lead: tuple[int, float]
    follows: list[tuple[int, float]] = field(default_factory=list)

    @property
    def expiry_day(self) -> int:
        return self.risk.expiry_day

    def lines(self) -> list[tuple[int, float]]:
        return [self.lead, *self.follows]

    @property
    def total_line(self) -> float:
        return self.lead[1] + sum(line for _, line in self.follows)

    def in_force(self, day: int) -> bool:
        return self.inception_day <= day < self.risk.expiry_day

    def summary(self) -> str:
        return f"risk={self.risk.risk_id} lines={len(self.follows) + 1} total={self.total_line:.6f}"


@dataclass(frozen=True, slots=True)
class AttritionalLoss:
    loss_id: int
    risk_id: int
    day: int
    amount: float

    def summary(self) -> str:
        return f"loss={self.loss_id} risk={self.risk_id} amount={self.amount:.2f}"


@dataclass(frozen=True, slots=True)
class CatastropheLoss:
    """A catastrophe striking one peril region; ``severity`` is the total regional loss."""

    cat_id: int
    day: int
    peril_region: int
    severity: float

    def summary(self) -> str:
        return f"cat={self.cat_id} region={self.peril_region} severity={self.severity:.2f}"


@dataclass(frozen=True, slots=True)
class Claim:
    loss_id: int
    risk_id: int
    syndicate_id: int
    amount: float
    signed_line: float
    full_loss: float
    source: LossSource
    day: int

    def summary(self) -> str:
        return (
            f"loss={self.loss_id} risk={self.risk_id} syndicate={self.syndicate_id} "
            f"amount={self.amount:.2f} source={self.source.value}"
        )


@dataclass(frozen=True, slots=True)
class Bankruptcy:
    syndicate_id: int
    pid: int
    capital: float
    day: int

    def summary(self) -> str:
        return f"syndicate={self.syndicate_id} capital={self.capital:.2f}"


@dataclass(frozen=True, slots=True)
class PricingStatistics:
    """Monthly market snapshot from the risk repository."""

    month: int
    risks_broadcast: int
    policies_bound: int
    mean_bound_premium: float
    mean_signed_line_total: float
    carried: bool

    def summary(self) -> str:
        return (
            f"month={self.month} risks={self.risks_broadcast} bound={self.policies_bound} "
            f"premium={self.mean_bound_premium:.2f} carried={int(self.carried)}"
        )


@dataclass(frozen=True, slots=True)
class LossStatistics:
    """Yearly industry loss statistics: claims per policy-year and mean claim."""

    year: int
    claim_frequency: float
    claim_severity: float
    claims_count: int
    exposure_years: float

    @property
    def expected_cost(self) -> float:
        return self.claim_frequency * self.claim_severity

    def summary(self) -> str:
        return (
            f"year={self.year} frequency={self.claim_frequency:.6f} "
            f"severity={self.claim_severity:.2f} claims={self.claims_count}"
        )
