"""Assemble a market from a config and run one replication."""

from __future__ import annotations

from dataclasses import dataclass

from .broker import Broker, RiskIds
from .config import ScenarioConfig
from .engine import Clock, EventKind, Simulation
from .industry import IndustryStatistics
from .losses import AttritionalLossGenerator, AttritionalParams, CatastropheLossGenerator, CatastropheParams
from .metrics import MetricsSink, RunResult, SyndicateLedger
from .network import BrokerSyndicateNetwork
from .repository import RiskRepository
from .syndicate import Syndicate


@dataclass
class Market:
    sim: Simulation
    syndicates: list[Syndicate]
    brokers: list[Broker]
    repository: RiskRepository
    industry: IndustryStatistics
    sink: MetricsSink
    catastrophes: CatastropheLossGenerator | None


def build_market(cfg: ScenarioConfig, seed: int, record_trace: bool = False) -> Market:
    """Wire every process into a fresh simulation.

    Registration order fixes the order of same-kind handlers within a
    dispatch, so it is part of the reproducibility contract.
    """
    sim = Simulation(cfg.end_day, seed=seed, record_trace=record_trace)
    sim.register(Clock())
    syndicates = [sim.register(Syndicate(i, cfg)) for i in range(cfg.num_syndicates)]
    pids = {s.syndicate_id: s.pid for s in syndicates}
    sim.register(BrokerSyndicateNetwork(cfg, pids))
    repository = sim.register(RiskRepository(cfg, pids))
    sim.register(
        AttritionalLossGenerator(AttritionalParams(cfg.claim_frequency, cfg.cov, cfg.mu))
    )
    cats = None
    if cfg.catastrophe_rate > 0:
        cats = sim.register(
            CatastropheLossGenerator(CatastropheParams.from_config(cfg), cfg.number_of_peril_regions, cfg.horizon_years)
        )
    ids = RiskIds()
    brokers = [sim.register(Broker(b, cfg, ids)) for b in range(cfg.num_brokers)]
    industry = sim.register(IndustryStatistics(cfg))
    sink = sim.register(MetricsSink(syndicates, industry))
    return Market(sim, syndicates, brokers, repository, industry, sink, cats)


def run_market(cfg: ScenarioConfig, seed: int, record_trace: bool = False) -> RunResult:
    m = build_market(cfg, seed, record_trace)
    m.sim.schedule(EventKind.SIMULATION_STARTED, 0)
    m.sim.run()
    ledgers = [
        SyndicateLedger(
            s.syndicate_id, s.initial_capital, s.capital, s.total_premiums, s.total_claims, s.total_dividends,
            s.insolvent,
        )
        for s in m.syndicates
    ]
    return RunResult(
        seed=seed,
        frames=m.sink.frames,
        industry=m.sink.industry_frames,
        catastrophes=m.repository.catastrophes,
        ledgers=ledgers,
        line_totals=m.repository.line_totals,
        events=sum(m.sim.dispatched.values()),
        trace=m.sim.trace_lines() if record_trace else [],
    )
