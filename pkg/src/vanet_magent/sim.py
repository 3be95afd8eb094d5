"""Deterministic discrete-event core: clock, event queue, PRNG and trace log.

Time is integer milliseconds. Simultaneous events pop in scheduling order.
The PRNG is MT19937 (Python's ``random.Random``) with integer draws taken by
rejection sampling over ``getrandbits``, so the draw sequence depends only on
the seed.
"""

from __future__ import annotations

import enum
import heapq
import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Any, Callable

from .errors import BadRange, PastEvent

PRNG_NAME = "MT19937"


class EventKind(enum.Enum):
    AGENT_ARRIVAL = "agent-arrival"
    MIGRATION_RETRY = "migration-retry"
    MOBILITY_TICK = "mobility-tick"
    DISCOVERY_ROUND = "discovery-round"
    ALERT_RAISED = "alert-raised"
    QUERY_ISSUED = "query-issued"
    TASK_STEP = "task-step"


@dataclass(order=True)
class Event:
    fire_at: int
    seq: int
    kind: EventKind = field(compare=False)
    target: Any = field(compare=False, default=None)
    data: dict = field(compare=False, default_factory=dict)


class _EndOfSimulation:
    def __repr__(self):
        return "END"

    def __bool__(self):
        return False


END = _EndOfSimulation()


class Rng:
    """Seeded MT19937 stream with platform-independent integer draws."""

    def __init__(self, seed: int):
        if seed < 0 or seed >= 1 << 64:
            raise BadRange(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self._mt = random.Random(seed)

    def uniform(self, lo: int, hi: int) -> int:
        if lo > hi:
            raise BadRange(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        if span == 1:
            return lo
        k = span.bit_length()
        r = self._mt.getrandbits(k)
        while r >= span:
            r = self._mt.getrandbits(k)
        return lo + r

    def random(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return self._mt.getrandbits(53) / 9007199254740992.0

    def choice(self, seq):
        return seq[self.uniform(0, len(seq) - 1)]

    def getstate(self):
        return self._mt.getstate()


@dataclass(frozen=True)
class TraceRecord:
    time: int
    category: str
    payload: dict

    def to_json(self) -> str:
        obj = {"time": self.time, "category": self.category}
        obj.update(self.payload)
        return json.dumps(obj, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "TraceRecord":
        obj = json.loads(line)
        time = obj.pop("time")
        category = obj.pop("category")
        return cls(time, category, obj)


class TraceLog:
    def __init__(self):
        self.records: list[TraceRecord] = []

    def append(self, time: int, category: str, /, **payload) -> TraceRecord:
        if "time" in payload or "category" in payload:
            raise ValueError("'time' and 'category' are reserved trace keys")
        rec = TraceRecord(time, category, payload)
        self.records.append(rec)
        return rec

    def of(self, category: str) -> list[TraceRecord]:
        return [r for r in self.records if r.category == category]

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def dumps(self) -> str:
        return "".join(r.to_json() + "\n" for r in self.records)

    def write(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write(self.dumps())

    @classmethod
    def read(cls, path) -> "TraceLog":
        log = cls()
        with open(path) as fh:
            log.records = [TraceRecord.from_json(line) for line in fh if line.strip()]
        return log


Handler = Callable[[Event], None]


class Engine:
    """Single-threaded event loop owning the clock, queue, RNG and trace."""

    def __init__(self, seed: int = 0, trace_dispatch: bool = True):
        self.clock = 0
        self.rng = Rng(seed)
        self.trace = TraceLog()
        self.trace_dispatch = trace_dispatch
        self.handlers: dict[EventKind, Handler] = {}
        self._queue: list[Event] = []
        self._seq = itertools.count()
        self.scheduled = 0
        self.dispatched = 0
        self.trace.append(0, "header", seed=seed, prng=PRNG_NAME)

    def on(self, kind: EventKind, handler: Handler) -> None:
        self.handlers[kind] = handler

    def schedule(self, fire_at: int, kind: EventKind, target=None, **data) -> Event:
        if fire_at < self.clock:
            raise PastEvent(f"cannot schedule at t={fire_at} when clock={self.clock}")
        ev = Event(int(fire_at), next(self._seq), kind, target, data)
        heapq.heappush(self._queue, ev)
        self.scheduled += 1
        return ev

    def schedule_in(self, delay: int, kind: EventKind, target=None, **data) -> Event:
        return self.schedule(self.clock + delay, kind, target, **data)

    def schedule_event(self, e: Event) -> Event:
        """Queue a pre-built event; its seq is reassigned in scheduling order."""
        return self.schedule(e.fire_at, e.kind, e.target, **e.data)

    @property
    def pending(self) -> int:
        return len(self._queue)

    def peek_time(self):
        return self._queue[0].fire_at if self._queue else None

    def step(self):
        if not self._queue:
            return END
        ev = heapq.heappop(self._queue)
        self.clock = ev.fire_at
        self.dispatched += 1
        if self.trace_dispatch:
            self.trace.append(self.clock, "dispatch", kind=ev.kind.value,
                              target=str(ev.target), seq=ev.seq)
        handler = self.handlers.get(ev.kind)
        if handler is not None:
            handler(ev)
        return ev

    def run(self, until: int | None = None) -> int:
        """Dispatch events with ``fire_at < until`` (all events if None)."""
        n = 0
        while self._queue and (until is None or self._queue[0].fire_at < until):
            self.step()
            n += 1
        return n

    def rng_uniform(self, lo: int, hi: int) -> int:
        return self.rng.uniform(lo, hi)
