"""Broker-syndicate network: who gets asked to quote which risk."""

from __future__ import annotations

import numpy as np

from .config import ScenarioConfig
from .engine import Event, EventKind, Process
from .records import QuoteRequest, Risk, Role


class Topology:
    """Ranks live syndicates for a broker; lower rank index is preferred."""

    def rank(self, broker_id: int, live: list[int]) -> list[int]:
        raise NotImplementedError


class RandomTopology(Topology):
    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def rank(self, broker_id, live):
        if len(live) <= 1:
            return list(live)
        return [live[i] for i in self.rng.permutation(len(live))]


class CircularTopology(Topology):
    """Brokers and syndicates sit on a unit circle; nearer means cheaper to deal."""

    def __init__(self, broker_positions, syndicate_positions):
        self.broker_positions = np.asarray(broker_positions, dtype=float)
        self.syndicate_positions = np.asarray(syndicate_positions, dtype=float)

    @classmethod
    def draw(cls, rng, num_brokers, num_syndicates):
        return cls(rng.random(num_brokers), rng.random(num_syndicates))

    def distance(self, broker_id: int, syndicate_id: int) -> float:
        d = abs(self.broker_positions[broker_id] - self.syndicate_positions[syndicate_id]) % 1.0
        return min(d, 1.0 - d)

    def rank(self, broker_id, live):
        return sorted(live, key=lambda s: (self.distance(broker_id, s), s))


class GraphTopology(Topology):
    """Weighted bipartite graph; heavier edge means an easier relationship."""

    def __init__(self, weights):
        self.weights = np.asarray(weights, dtype=float)
        if not np.all(np.isfinite(self.weights)) or np.any(self.weights <= 0):
            raise ValueError("edge weights must be finite and positive")

    @classmethod
    def draw(cls, rng, num_brokers, num_syndicates):
        # uniform on (0, 1]
        return cls(1.0 - rng.random((num_brokers, num_syndicates)))

    def rank(self, broker_id, live):
        row = self.weights[broker_id]
        return sorted(live, key=lambda s: (-row[s], s))


def make_topology(cfg: ScenarioConfig, rng: np.random.Generator) -> Topology:
    if cfg.topology == "circular":
        return CircularTopology.draw(rng, cfg.num_brokers, cfg.num_syndicates)
    if cfg.topology == "graph":
        return GraphTopology.draw(rng, cfg.num_brokers, cfg.num_syndicates)
    return RandomTopology(rng)


class BrokerSyndicateNetwork(Process):
    """Requests lead quotes from the top ``lead_top_k`` live syndicates and
    follow quotes from the next ``follow_top_k`` (a syndicate asked to lead a
    risk is never also asked to follow it)."""

    subscriptions = (EventKind.RISK_BROADCASTED, EventKind.SYNDICATE_BANKRUPTED)

    def __init__(self, cfg: ScenarioConfig, syndicate_pids: dict[int, int], topology: Topology | None = None):
        self.cfg = cfg
        self.lead_top_k = cfg.lead_top_k
        self.follow_top_k = cfg.effective_follow_top_k
        self.syndicate_pids = dict(syndicate_pids)
        self.live = sorted(syndicate_pids)
        self.topology = topology

    def bind(self, sim, pid):
        super().bind(sim, pid)
        if self.topology is None:
            self.topology = make_topology(self.cfg, sim.stream("network"))

    def select(self, risk: Risk) -> tuple[list[int], list[int]]:
        if not self.live:
            return [], []
        ranked = self.topology.rank(risk.broker_id, self.live)
        leads = ranked[: self.lead_top_k]
        follows = ranked[self.lead_top_k : self.lead_top_k + self.follow_top_k] if self.follow_top_k else []
        return leads, follows

    def select_leads(self, risk: Risk) -> list[int]:
        return self.select(risk)[0]

    def select_follows(self, risk: Risk) -> list[int]:
        return self.select(risk)[1]

    def on_risk_broadcasted(self, event: Event) -> None:
        risk = event.payload
        leads, follows = self.select(risk)
        sim = self.sim
        for sid in leads:
            sim.emit(EventKind.LEAD_QUOTE_REQUESTED, QuoteRequest(risk, sid, Role.LEAD), target=self.syndicate_pids[sid])
        for sid in follows:
            sim.emit(
                EventKind.FOLLOW_QUOTE_REQUESTED, QuoteRequest(risk, sid, Role.FOLLOW), target=self.syndicate_pids[sid]
            )

    def on_syndicate_bankrupted(self, event: Event) -> None:
        sid = event.payload.syndicate_id
        if sid in self.live:
            self.live.remove(sid)
