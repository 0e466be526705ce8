import pytest
from hypothesis import given
from hypothesis import strategies as st

from lloydsim.config import preset_config
from lloydsim.engine import EventKind, Simulation
from lloydsim.records import AttritionalLoss, Bankruptcy, CatastropheLoss, Quote, Risk, Role
from lloydsim.repository import RiskRepository, pick_lead, sign_down

CLAIM_KINDS = [
    EventKind.LEAD_QUOTE_ACCEPTED,
    EventKind.FOLLOW_QUOTE_ACCEPTED,
    EventKind.CLAIM_RECEIVED,
    EventKind.INDUSTRY_PRICING_STATISTICS_REPORTED,
]


def q(sid, price, line=0.5, role=Role.LEAD, rid=0):
    return Quote(rid, sid, role, price, line)


def test_pick_lead_cheapest():
    assert pick_lead([q(0, 340_000), q(1, 310_000)]).syndicate_id == 1


def test_pick_lead_tie_goes_to_lowest_id():
    assert pick_lead([q(3, 300_000), q(1, 300_000), q(2, 300_000)]).syndicate_id == 1


def test_pick_lead_empty():
    assert pick_lead([]) is None


@given(st.lists(st.tuples(st.integers(0, 9), st.floats(1, 1e7)), min_size=1, max_size=8, unique_by=lambda t: t[0]))
def test_pick_lead_is_argmin_under_permutation(pairs):
    quotes = [q(s, p) for s, p in pairs]
    best = pick_lead(quotes)
    assert best.price == min(p for _, p in pairs)
    assert pick_lead(list(reversed(quotes))) == best


def test_sign_down_fits_without_scaling():
    assert sign_down(0.5, [0.1, 0.1]) == [0.1, 0.1]


def test_sign_down_is_proportional():
    out = sign_down(0.5, [0.1] * 7)
    assert out == pytest.approx([0.0714285714] * 7, abs=1e-9)
    assert sum(out) == pytest.approx(0.5)


def test_sign_down_full_lead_leaves_nothing():
    assert sign_down(1.0, [0.1, 0.2]) == [0.0, 0.0]


@given(st.floats(0.01, 1.0), st.lists(st.floats(0.001, 1.0), max_size=10))
def test_total_line_never_exceeds_one(lead, follows):
    assert lead + sum(sign_down(lead, follows)) <= 1 + 1e-9


class Harness:
    """Repository wired to recorders standing in for five syndicates."""

    def __init__(self, recorder, preset="scenario4", n=5):
        self.cfg = preset_config(preset)
        self.sim = Simulation(end_day=2000, seed=0)
        self.synd = [self.sim.register(recorder(CLAIM_KINDS)) for _ in range(n)]
        self.repo = self.sim.register(RiskRepository(self.cfg, {i: s.pid for i, s in enumerate(self.synd)}))
        self.sim.schedule(EventKind.SIMULATION_STARTED, 0)

    def bind(self, risk, leads, follows=(), day=None):
        day = risk.inception_day if day is None else day
        s = self.sim
        s.schedule(EventKind.RISK_BROADCASTED, day, risk)
        for sid, price in leads:
            s.schedule(EventKind.LEAD_QUOTE_OFFERED, day + 3, q(sid, price, rid=risk.risk_id))
        s.schedule(EventKind.LEAD_QUOTE_SELECTION_DEADLINE_REACHED, day + 5, risk)
        for sid, line in follows:
            s.schedule(EventKind.FOLLOW_QUOTE_OFFERED, day + 8, q(sid, 0.0, line, Role.FOLLOW, risk.risk_id))
        s.schedule(EventKind.FOLLOW_QUOTE_SELECTION_DEADLINE_REACHED, day + 10, risk)

    def seen(self, sid, kind):
        return [e.payload for e in self.synd[sid].seen if e.kind is kind]

    def claims(self):
        # claims are broadcast; every recorder sees each one
        return self.seen(0, EventKind.CLAIM_RECEIVED)


def risk(rid, region=0, day=0, limit=1e7):
    return Risk(rid, 0, day, day + 360, limit, region)


def test_lead_binding_and_follow_acceptance(recorder):
    h = Harness(recorder)
    r = risk(0)
    h.bind(r, [(0, 340_000), (1, 310_000)], [(2, 0.1), (3, 0.1)])
    h.sim.run()
    acc = h.seen(0, EventKind.LEAD_QUOTE_ACCEPTED)
    assert len(acc) == 1 and acc[0].syndicate_id == 1 and acc[0].premium == 310_000 and acc[0].day == 5
    assert [a.signed_line for a in h.seen(2, EventKind.FOLLOW_QUOTE_ACCEPTED)] == [0.1]
    assert h.seen(4, EventKind.FOLLOW_QUOTE_ACCEPTED) == []
    assert h.repo.line_totals == [pytest.approx(0.7)]


def test_no_follow_without_a_lead(recorder):
    h = Harness(recorder)
    h.bind(risk(0), [], [(2, 0.1)])
    h.sim.run()
    assert h.repo.lapsed == 1
    assert h.seen(2, EventKind.FOLLOW_QUOTE_ACCEPTED) == []


def test_attritional_claim_split_by_line(recorder):
    h = Harness(recorder)
    h.bind(risk(0), [(1, 300_000)], [(2, 0.1), (3, 0.1)])
    h.sim.schedule(EventKind.ATTRITIONAL_LOSS_OCCURRED, 100, AttritionalLoss(7, 0, 100, 2_000_000))
    h.sim.run()
    claims = {c.syndicate_id: c.amount for c in h.claims()}
    assert claims == {1: pytest.approx(1e6), 2: pytest.approx(2e5), 3: pytest.approx(2e5)}
    assert all(c.full_loss == 2_000_000 and c.loss_id == 7 for c in h.claims())


def test_loss_capped_at_limit(recorder):
    h = Harness(recorder)
    h.bind(risk(0), [(1, 300_000)])
    h.sim.schedule(EventKind.ATTRITIONAL_LOSS_OCCURRED, 100, AttritionalLoss(1, 0, 100, 25_000_000))
    h.sim.run()
    (c,) = h.claims()
    assert c.amount == pytest.approx(5e6) and c.full_loss == 1e7


def test_loss_before_binding_is_dropped(recorder):
    h = Harness(recorder)
    h.bind(risk(0), [(1, 300_000)])
    h.sim.schedule(EventKind.ATTRITIONAL_LOSS_OCCURRED, 2, AttritionalLoss(1, 0, 2, 1e6))
    h.sim.run()
    assert h.claims() == []


def test_catastrophe_cascade_hits_only_region_in_force(recorder):
    h = Harness(recorder)
    h.bind(risk(0, region=3), [(0, 300_000)])
    h.bind(risk(1, region=3), [(1, 300_000)])
    h.bind(risk(2, region=4), [(2, 300_000)])
    h.bind(risk(3, region=3, day=300), [(3, 300_000)])  # not yet bound on day 200
    h.sim.schedule(EventKind.CATASTROPHE_LOSS_OCCURRED, 200, CatastropheLoss(0, 200, 3, 4_000_000))
    h.sim.run()
    claims = {c.syndicate_id: c.amount for c in h.claims()}
    assert claims == {0: pytest.approx(1e6), 1: pytest.approx(1e6)}
    (rec,) = h.repo.catastrophes
    assert rec.policies_hit == 2 and rec.insured_loss == pytest.approx(4e6) and rec.uninsured_loss == 0
    assert rec.claims_paid == pytest.approx(2e6)
    assert all(c.loss_id < 0 for c in h.claims())


def test_catastrophe_on_empty_region(recorder):
    h = Harness(recorder)
    h.sim.schedule(EventKind.CATASTROPHE_LOSS_OCCURRED, 50, CatastropheLoss(0, 50, 1, 3e6))
    h.sim.run()
    assert h.claims() == []
    assert h.repo.catastrophes[0].uninsured_loss == 3e6


def test_claims_conserve_the_capped_loss(recorder):
    h = Harness(recorder)
    h.bind(risk(0), [(0, 300_000)], [(1, 0.1), (2, 0.1), (3, 0.1), (4, 0.1)])
    h.sim.schedule(EventKind.ATTRITIONAL_LOSS_OCCURRED, 60, AttritionalLoss(1, 0, 60, 3_333_333))
    h.sim.run()
    total_line = h.repo.line_totals[0]
    assert sum(c.amount for c in h.claims()) == pytest.approx(3_333_333 * total_line, rel=1e-12)


def test_expired_policy_pays_nothing(recorder):
    h = Harness(recorder)
    h.bind(risk(0), [(0, 300_000)])
    h.sim.schedule(EventKind.ATTRITIONAL_LOSS_OCCURRED, 361, AttritionalLoss(1, 0, 361, 1e6))
    h.sim.run()
    assert h.claims() == []
    assert h.repo.policies == {}


def test_dead_syndicate_receives_no_claims(recorder):
    h = Harness(recorder)
    h.bind(risk(0), [(0, 300_000)], [(1, 0.1)])
    h.sim.schedule(EventKind.SYNDICATE_BANKRUPTED, 50, Bankruptcy(1, h.synd[1].pid, -1.0, 50))
    h.sim.schedule(EventKind.ATTRITIONAL_LOSS_OCCURRED, 60, AttritionalLoss(1, 0, 60, 1e6))
    h.sim.run()
    assert {c.syndicate_id for c in h.claims()} == {0}


def test_monthly_statistics_carry_forward(recorder):
    h = Harness(recorder)
    h.bind(risk(0), [(0, 300_000)])
    h.bind(risk(1), [(1, 500_000)])
    for m in (1, 2):
        h.sim.schedule(EventKind.MONTH, 30 * m)
    h.sim.run()
    first, second = h.seen(0, EventKind.INDUSTRY_PRICING_STATISTICS_REPORTED)
    assert first.policies_bound == 2 and first.mean_bound_premium == 400_000 and not first.carried
    assert second.policies_bound == 0 and second.mean_bound_premium == 400_000 and second.carried
