import pytest

from lloydsim.config import preset_config
from lloydsim.engine import Event, EventKind, Simulation
from lloydsim.pricing import QuoteComponentComputed
from lloydsim.records import Acceptance, Claim, LossSource, QuoteRequest, Risk, Role
from lloydsim.syndicate import Syndicate, dividend, follow_line

OUT = [EventKind.LEAD_QUOTE_OFFERED, EventKind.FOLLOW_QUOTE_OFFERED, EventKind.SYNDICATE_BANKRUPTED]


def test_dividend_examples():
    assert dividend(1_000_000, 0.4) == pytest.approx(400_000)
    assert dividend(-200_000, 0.4) == 0
    assert dividend(1_000_000, 0.0) == 0


def test_follow_line_examples():
    assert follow_line(0.1, 300_000, 300_000) == pytest.approx(0.1)
    assert follow_line(0.1, 360_000, 300_000) == pytest.approx(0.12)
    assert follow_line(0.1, 150_000, 300_000) == pytest.approx(0.05)
    assert follow_line(0.1, 1e9, 1.0) == 1.0


def _setup(recorder, preset="scenario1", **over):
    cfg = preset_config(preset, **over)
    sim = Simulation(end_day=5000, seed=0)
    syn = sim.register(Syndicate(0, cfg))
    rec = sim.register(recorder(OUT))
    return sim, syn, rec


def _risk(rid=0, region=0):
    return Risk(rid, 0, 0, 360, 1e7, region)


def _ev(kind, payload, day=0):
    return Event(kind, day, payload)


def test_lead_quote_at_prior_price(recorder):
    sim, syn, rec = _setup(recorder)
    r = _risk()
    sim.schedule(EventKind.LEAD_QUOTE_REQUESTED, 0, QuoteRequest(r, 0, Role.LEAD), target=syn.pid)
    sim.schedule(EventKind.LEAD_QUOTE_CONSOLIDATION_DEADLINE_REACHED, 3, r)
    sim.run()
    (ev,) = rec.seen
    assert ev.kind is EventKind.LEAD_QUOTE_OFFERED
    assert ev.payload.price == pytest.approx(300_000) and ev.payload.line_size == 0.5


def test_missing_component_withholds_quote(recorder):
    _, syn, _ = _setup(recorder)
    comps = {"actuarial": QuoteComponentComputed("actuarial", 0, "lead", 300_000)}
    assert syn.consolidate(comps) is None
    assert syn.consolidate(None) is None


def test_veto_withholds_quote(recorder):
    _, syn, _ = _setup(recorder, "scenario2")
    comps = {
        "actuarial": QuoteComponentComputed("actuarial", 0, "lead", 300_000),
        "underwriting": QuoteComponentComputed("underwriting", 0, "lead", 1.0),
        "premium_em": QuoteComponentComputed("premium_em", 0, "lead", 1.0, veto=True),
    }
    assert syn.consolidate(comps) is None
    comps["premium_em"] = QuoteComponentComputed("premium_em", 0, "lead", 1.0)
    assert syn.consolidate(comps) == pytest.approx(300_000)


def test_var_veto_never_reaches_market(recorder):
    sim, syn, rec = _setup(recorder, "scenario3", capital=1_000)
    r = _risk()
    sim.schedule(EventKind.SIMULATION_STARTED, 0)
    sim.schedule(EventKind.LEAD_QUOTE_REQUESTED, 0, QuoteRequest(r, 0, Role.LEAD), target=syn.pid)
    sim.schedule(EventKind.LEAD_QUOTE_CONSOLIDATION_DEADLINE_REACHED, 3, r)
    sim.run()
    assert rec.seen == []


def test_follow_line_uses_lead_price(recorder):
    sim, syn, rec = _setup(recorder, "scenario4")
    r = _risk()
    sim.schedule(EventKind.FOLLOW_QUOTE_REQUESTED, 0, QuoteRequest(r, 0, Role.FOLLOW), target=syn.pid)
    sim.schedule(EventKind.LEAD_QUOTE_ACCEPTED, 5, Acceptance(r, 3, Role.LEAD, 250_000, 0.5, 5))
    sim.schedule(EventKind.FOLLOW_QUOTE_CONSOLIDATION_DEADLINE_REACHED, 8, r)
    sim.run()
    (ev,) = rec.seen
    assert ev.payload.line_size == pytest.approx(0.1 * 300_000 / 250_000)


def test_follow_without_lead_is_not_offered(recorder):
    sim, syn, rec = _setup(recorder, "scenario4")
    r = _risk()
    sim.schedule(EventKind.FOLLOW_QUOTE_REQUESTED, 0, QuoteRequest(r, 0, Role.FOLLOW), target=syn.pid)
    sim.schedule(EventKind.FOLLOW_QUOTE_CONSOLIDATION_DEADLINE_REACHED, 8, r)
    sim.run()
    assert rec.seen == []


def test_booking_credits_premium_share(recorder):
    _, syn, _ = _setup(recorder)
    syn.book(Acceptance(_risk(region=4), 0, Role.LEAD, 300_000, 0.5, 5))
    assert syn.capital == 10_150_000
    assert syn.region_counts[4] == 1


def _claim(amount, sid=0):
    return Claim(1, 0, sid, amount, 0.5, 2 * amount, LossSource.ATTRITIONAL, 10)


def test_claim_reduces_capital(recorder):
    _, syn, rec = _setup(recorder)
    syn.on_claim_received(_ev(EventKind.CLAIM_RECEIVED, _claim(500_000)))
    assert syn.capital == 9_500_000 and not syn.insolvent
    syn.on_claim_received(_ev(EventKind.CLAIM_RECEIVED, _claim(0)))
    assert syn.capital == 9_500_000


def test_claim_for_other_syndicate_ignored(recorder):
    _, syn, _ = _setup(recorder)
    syn.on_claim_received(_ev(EventKind.CLAIM_RECEIVED, _claim(500_000, sid=3)))
    assert syn.capital == 10_000_000


def test_insolvency_is_announced_once_and_final(recorder):
    sim, syn, rec = _setup(recorder, capital=100_000)
    sim.schedule(EventKind.CLAIM_RECEIVED, 10, _claim(500_000))
    sim.schedule(EventKind.CLAIM_RECEIVED, 11, _claim(500_000))
    r = _risk()
    sim.schedule(EventKind.LEAD_QUOTE_REQUESTED, 12, QuoteRequest(r, 0, Role.LEAD), target=syn.pid)
    sim.schedule(EventKind.LEAD_QUOTE_CONSOLIDATION_DEADLINE_REACHED, 15, r)
    sim.run()
    assert [e.kind for e in rec.seen] == [EventKind.SYNDICATE_BANKRUPTED]
    assert rec.seen[0].payload.capital == -400_000
    assert syn.capital == -400_000 and syn.insolvent
    assert not sim.is_live(syn.pid)


def test_year_end_dividend_and_anchor(recorder):
    _, syn, _ = _setup(recorder)
    syn.capital = 11_000_000
    syn.on_year(_ev(EventKind.YEAR, None, 360))
    assert syn.dividend_ytd == pytest.approx(400_000)
    assert syn.capital == pytest.approx(10_600_000)
    syn.roll_year()
    syn.capital -= 200_000
    syn.on_year(_ev(EventKind.YEAR, None, 720))
    assert syn.dividend_ytd == 0


def test_accounting_identity_over_a_run():
    from lloydsim.market import run_market

    res = run_market(preset_config("scenario2"), seed=3)
    for led in res.ledgers:
        expected = led.capital_start + led.premiums - led.claims - led.dividends
        assert led.capital_end == pytest.approx(expected, rel=1e-6, abs=1e-6)
