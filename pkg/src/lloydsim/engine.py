"""Deterministic discrete-event core.

The engine owns a virtual clock measured in whole days, a priority queue of
events ordered by ``(day, tier, seq)``, a registry of processes keyed by the
event kinds they subscribe to, and a factory for named random streams.

Processes declare their subscriptions as a tuple of :class:`EventKind` and
implement one ``on_<kind>`` method per subscribed kind::

    class Counter(Process):
        subscriptions = (EventKind.DAY,)

        def on_day(self, event):
            self.days += 1

Events may carry a ``target`` process id, in which case only that process
receives them.
"""

from __future__ import annotations

import enum
import heapq
import zlib
from dataclasses import dataclass
from typing import Any, Callable, ClassVar, Iterable

import numpy as np

DAYS_PER_MONTH = 30
DAYS_PER_YEAR = 360


class SchedulingError(RuntimeError):
    """Raised when an event is scheduled before the current clock time."""


def month_of(day: int) -> int:
    return day // DAYS_PER_MONTH


def year_of(day: int) -> int:
    return day // DAYS_PER_YEAR


class EventKind(enum.Enum):
    # value: (handler suffix, tier)
    SIMULATION_STARTED = ("simulation_started", 0)
    DAY = ("day", 1)
    MONTH = ("month", 2)
    YEAR = ("year", 3)
    POLICY_EXPIRED = ("policy_expired", 4)

    ATTRITIONAL_LOSS_OCCURRED = ("attritional_loss_occurred", 10)
    CATASTROPHE_LOSS_OCCURRED = ("catastrophe_loss_occurred", 10)
    CLAIM_RECEIVED = ("claim_received", 10)
    SYNDICATE_BANKRUPTED = ("syndicate_bankrupted", 10)

    RISK_BROADCASTED = ("risk_broadcasted", 20)
    LEAD_QUOTE_REQUESTED = ("lead_quote_requested", 20)
    FOLLOW_QUOTE_REQUESTED = ("follow_quote_requested", 20)
    LEAD_QUOTE_CONSOLIDATION_DEADLINE_REACHED = ("lead_quote_consolidation_deadline_reached", 20)
    LEAD_QUOTE_OFFERED = ("lead_quote_offered", 20)
    LEAD_QUOTE_SELECTION_DEADLINE_REACHED = ("lead_quote_selection_deadline_reached", 20)
    LEAD_QUOTE_ACCEPTED = ("lead_quote_accepted", 20)
    FOLLOW_QUOTE_CONSOLIDATION_DEADLINE_REACHED = ("follow_quote_consolidation_deadline_reached", 20)
    FOLLOW_QUOTE_OFFERED = ("follow_quote_offered", 20)
    FOLLOW_QUOTE_SELECTION_DEADLINE_REACHED = ("follow_quote_selection_deadline_reached", 20)
    FOLLOW_QUOTE_ACCEPTED = ("follow_quote_accepted", 20)

    INDUSTRY_PRICING_STATISTICS_REPORTED = ("industry_pricing_statistics_reported", 30)
    INDUSTRY_LOSS_STATISTICS_REPORTED = ("industry_loss_statistics_reported", 30)

    @property
    def handler(self) -> str:
        return "on_" + self.value[0]

    @property
    def tier(self) -> int:
        return self.value[1]

    @property
    def label(self) -> str:
        return "".join(part.capitalize() for part in self.value[0].split("_"))


_TIER = {kind: kind.tier for kind in EventKind}


class Event:
    """A timestamped message. ``seq`` is assigned by the engine on scheduling."""

    __slots__ = ("kind", "day", "seq", "payload", "target")

    def __init__(self, kind: EventKind, day: int, payload: Any = None, target: int | None = None):
        self.kind = kind
        self.day = day
        self.seq = -1
        self.payload = payload
        self.target = target

    def __repr__(self) -> str:
        return f"Event({self.kind.label}, day={self.day}, seq={self.seq}, target={self.target})"


class Process:
    """Base class for anything that reacts to events.

    ``pid`` is assigned at registration. Subclasses list the kinds they want
    in ``subscriptions``; the engine binds ``on_<kind>`` for each.
    """

    subscriptions: ClassVar[tuple[EventKind, ...]] = ()

    pid: int = -1
    sim: "Simulation"

    def bind(self, sim: "Simulation", pid: int) -> None:
        self.sim = sim
        self.pid = pid


def stream_seed(master_seed: int, label: str) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=int(master_seed), spawn_key=(zlib.crc32(label.encode()),))


def make_stream(master_seed: int, label: str) -> np.random.Generator:
    """Independent generator for ``label`` under ``master_seed``.

    The label hash is part of the spawn key, so adding a new stream never
    shifts the draws of existing ones.
    """
    return np.random.Generator(np.random.PCG64(stream_seed(master_seed, label)))


@dataclass
class TraceRecord:
    day: int
    seq: int
    kind: str
    summary: str

    def line(self) -> str:
        return f"{self.day},{self.seq},{self.kind},{self.summary}"


class Simulation:
    """Single-threaded event loop.

    Parameters
    ----------
    end_day : int
        Last day on which events are dispatched (inclusive).
    seed : int
        Master seed for every random stream drawn through :meth:`stream`.
    record_trace : bool
        Keep an ordered log of every dispatched event.
    """

    def __init__(self, end_day: int, seed: int = 0, record_trace: bool = False):
        if end_day < 0:
            raise ValueError("end_day must be non-negative")
        self.end_day = end_day
        self.seed = seed
        self.now = 0
        self._queue: list[tuple[int, int, int, Event]] = []
        self._seq = 0
        self._procs: dict[int, Process] = {}
        self._next_pid = 0
        self._handlers: dict[EventKind, tuple[Callable[[Event], None], ...]] = {k: () for k in EventKind}
        self._targeted: dict[tuple[int, EventKind], Callable[[Event], None]] = {}
        self._owners: dict[EventKind, tuple[int, ...]] = {k: () for k in EventKind}
        self.dispatched: dict[EventKind, int] = {k: 0 for k in EventKind}
        self.record_trace = record_trace
        self.trace: list[TraceRecord] = []
        self._removal_hooks: list[Callable[[int], None]] = []

    # -- processes -------------------------------------------------------
    def register(self, proc: Process) -> Process:
        pid = self._next_pid
        self._next_pid += 1
        proc.bind(self, pid)
        self._procs[pid] = proc
        for kind in proc.subscriptions:
            fn = getattr(proc, kind.handler)
            self._handlers[kind] = self._handlers[kind] + (fn,)
            self._owners[kind] = self._owners[kind] + (pid,)
            self._targeted[(pid, kind)] = fn
        return proc

    def register_all(self, procs: Iterable[Process]) -> None:
        for p in procs:
            self.register(p)

    def remove(self, pid: int) -> None:
        """Detach a process; it receives nothing from this point on."""
        proc = self._procs.pop(pid, None)
        if proc is None:
            return
        for kind in proc.subscriptions:
            owners = self._owners[kind]
            keep = [i for i, owner in enumerate(owners) if owner != pid]
            self._owners[kind] = tuple(owners[i] for i in keep)
            self._handlers[kind] = tuple(self._handlers[kind][i] for i in keep)
            self._targeted.pop((pid, kind), None)
        for hook in self._removal_hooks:
            hook(pid)

    def on_removal(self, hook: Callable[[int], None]) -> None:
        self._removal_hooks.append(hook)

    def is_live(self, pid: int) -> bool:
        return pid in self._procs

    def process(self, pid: int) -> Process:
        return self._procs[pid]

    def stream(self, label: str) -> np.random.Generator:
        return make_stream(self.seed, label)

    # -- scheduling ------------------------------------------------------
    def schedule(self, kind: EventKind, day: int, payload: Any = None, target: int | None = None) -> Event:
        if day < self.now:
            raise SchedulingError(f"{kind.label} scheduled for day {day} but clock is at {self.now}")
        ev = Event(kind, day, payload, target)
        ev.seq = self._seq
        self._seq += 1
        heapq.heappush(self._queue, (day, _TIER[kind], ev.seq, ev))
        return ev

    def emit(self, kind: EventKind, payload: Any = None, target: int | None = None) -> Event:
        return self.schedule(kind, self.now, payload, target)

    def __len__(self) -> int:
        return len(self._queue)

    # -- loop ------------------------------------------------------------
    def step(self) -> Event | None:
        if not self._queue or self._queue[0][0] > self.end_day:
            return None
        _, _, _, ev = heapq.heappop(self._queue)
        self._dispatch(ev)
        return ev

    def _dispatch(self, ev: Event) -> None:
        self.now = ev.day
        kind = ev.kind
        self.dispatched[kind] += 1
        if self.record_trace:
            self.trace.append(TraceRecord(ev.day, ev.seq, kind.label, summarize_payload(ev)))
        if kind is EventKind.SYNDICATE_BANKRUPTED:
            self.remove(ev.payload.pid)
        if ev.target is not None:
            fn = self._targeted.get((ev.target, kind))
            if fn is not None:
                fn(ev)
            return
        for fn in self._handlers[kind]:
            fn(ev)

    def run(self) -> None:
        queue = self._queue
        end = self.end_day
        pop = heapq.heappop
        dispatch = self._dispatch
        while queue and queue[0][0] <= end:
            dispatch(pop(queue)[3])

    def trace_lines(self) -> list[str]:
        return [r.line() for r in self.trace]


def summarize_payload(ev: Event) -> str:
    p = ev.payload
    if p is None:
        text = ""
    elif hasattr(p, "summary"):
        text = p.summary()
    else:
        text = str(p)
    if ev.target is not None:
        text = f"to={ev.target} {text}".strip()
    return text.replace(",", ";")


class Clock(Process):
    """Emits Day every day, Month every 30th day and Year every 360th day.

    Ticks are scheduled one day ahead rather than pre-filled, so the queue
    stays small over long horizons.
    """

    subscriptions = (EventKind.SIMULATION_STARTED, EventKind.DAY)

    def on_simulation_started(self, event: Event) -> None:
        self.sim.schedule(EventKind.DAY, 0)

    def on_day(self, event: Event) -> None:
        day = event.day
        if day > 0 and day % DAYS_PER_MONTH == 0:
            self.sim.schedule(EventKind.MONTH, day)
        if day > 0 and day % DAYS_PER_YEAR == 0:
            self.sim.schedule(EventKind.YEAR, day)
        if day < self.sim.end_day:
            self.sim.schedule(EventKind.DAY, day + 1)
