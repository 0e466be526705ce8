import numpy as np
import pytest

from lloydsim.config import preset_config
from lloydsim.engine import Event, EventKind
from lloydsim.industry import IndustryStatistics, split_exposure
from lloydsim.market import run_market
from lloydsim.records import Acceptance, Claim, LossSource, Risk, Role


def _ev(kind, payload, day=0):
    return Event(kind, day, payload)


def _stats():
    return IndustryStatistics(preset_config("scenario1"))


def _claim(loss_id, sid, line, full):
    return Claim(loss_id, 0, sid, full * line, line, full, LossSource.ATTRITIONAL, 10)


def test_split_exposure_across_year_boundary():
    assert split_exposure(180, 540) == {0: 0.5, 1: 0.5}
    assert split_exposure(0, 360) == {0: 1.0}


def test_frequency_from_claims_over_policy_years():
    s = _stats()
    s.exposure[0] = 540.0
    for i in range(54):
        s.on_claim_received(_ev(EventKind.CLAIM_RECEIVED, _claim(i, 0, 1.0, 2e6)))
    out = s.close_year(1)
    assert out.claim_frequency == pytest.approx(0.1)
    assert out.claim_severity == pytest.approx(2e6)


def test_shared_loss_counted_once_at_full_value():
    s = _stats()
    s.exposure[0] = 1.0
    s.on_claim_received(_ev(EventKind.CLAIM_RECEIVED, _claim(9, 0, 0.5, 1e6)))
    s.on_claim_received(_ev(EventKind.CLAIM_RECEIVED, _claim(9, 1, 0.1, 1e6)))
    out = s.close_year(1)
    assert out.claims_count == 1 and out.claim_severity == 1e6


def test_claim_free_year_carries_severity():
    s = _stats()
    s.exposure[0] = 100.0
    out = s.close_year(1)
    assert out.claim_frequency == 0 and out.claim_severity == 3_000_000


def test_empty_market_carries_frequency():
    s = _stats()
    s.exposure[0] = 10.0
    s.on_claim_received(_ev(EventKind.CLAIM_RECEIVED, _claim(1, 0, 1.0, 5e5)))
    first = s.close_year(1)
    second = s.close_year(2)
    assert second.claim_frequency == first.claim_frequency == 0.1


def test_counters():
    s = _stats()
    r = Risk(0, 0, 180, 540, 1e7, 0)
    s.on_risk_broadcasted(_ev(EventKind.RISK_BROADCASTED, r))
    s.on_lead_quote_accepted(_ev(EventKind.LEAD_QUOTE_ACCEPTED, Acceptance(r, 0, Role.LEAD, 3e5, 0.5, 185)))
    assert s.risks_entered == 1 and s.policies_bound == 1
    assert s.exposure[0] == pytest.approx(175 / 360) and s.exposure[1] == pytest.approx(0.5)


def test_long_run_frequency_matches_generator():
    # ample capital keeps every syndicate alive, so no claims go unobserved
    cfg = preset_config("scenario1", capital=1e10)
    lam = [f.claim_frequency for seed in range(3) for f in run_market(cfg, seed).industry if f.year > 1]
    assert abs(np.mean(lam) / 0.1 - 1) < 0.10
