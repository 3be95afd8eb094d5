"""Mobile-agent platform running inside the event engine.

Covers the five-state lifecycle and its audit log, a naming directory,
checkpointing of agents in transit, migration with bounded retries, cloning
and topic-based event notification.
"""

from __future__ import annotations

import copy
import csv
import enum
import itertools
from dataclasses import dataclass
from typing import Any, Callable

from .errors import (IllegalTransition, InvariantViolation, NotAdjacent, NotFound,
                     NotRunning, UnknownNode)
from .net import ConnectivityGraph, LinkResources, NodeId, transmission_delay
from .sim import Engine, EventKind


class AgentState(enum.Enum):
    CREATING = "Creating"
    RUNNING = "Running"
    SUSPENDING = "Suspending"
    RESUMING = "Resuming"
    DELETING = "Deleting"


S = AgentState
ALLOWED_TRANSITIONS: dict[AgentState, frozenset] = {
    S.CREATING: frozenset({S.RUNNING}),
    S.RUNNING: frozenset({S.SUSPENDING, S.RESUMING, S.DELETING}),
    S.SUSPENDING: frozenset({S.RUNNING, S.DELETING}),
    S.RESUMING: frozenset({S.RUNNING, S.DELETING}),
    S.DELETING: frozenset(),
}


def is_allowed(current: AgentState, new: AgentState) -> bool:
    return new in ALLOWED_TRANSITIONS[current]


class AgentKind(enum.Enum):
    DFA = "DFA"
    FPA = "FPA"
    RPA = "RPA"
    IVA = "IVA"
    OA = "OA"
    IFA = "IFA"


BUDGETED_KINDS = frozenset({AgentKind.FPA, AgentKind.OA, AgentKind.IFA})

DEFAULT_CODE_BYTES = {
    AgentKind.DFA: 4000,
    AgentKind.FPA: 1000,
    AgentKind.RPA: 1000,
    AgentKind.IVA: 2000,
    AgentKind.OA: 800,
    AgentKind.IFA: 1200,
}


@dataclass
class AgentRecord:
    agent_id: str
    kind: AgentKind
    owner: NodeId
    state: AgentState
    location: NodeId
    payload: Any = None
    hop_budget: int | None = None

    @property
    def name(self) -> str:
        return self.agent_id


@dataclass(frozen=True)
class LifeLogEntry:
    agent_id: str
    kind: AgentKind
    state: AgentState
    node: NodeId
    time: int


@dataclass(frozen=True)
class DirectoryEntry:
    node: NodeId
    registered_at: int


@dataclass(frozen=True)
class MigrationTicket:
    agent_id: str
    src: NodeId
    dst: NodeId
    attempt: int
    depart_time: int
    arrive_time: int


def payload_entries(payload) -> int:
    counter = getattr(payload, "entry_count", None)
    return counter() if callable(counter) else 0


Behavior = Callable[[AgentRecord, NodeId, int], None]


class AgentRuntime:
    """Agent, event, queue, directory and persistence managers in one place."""

    def __init__(self, engine: Engine, nodes=(), *, code_bytes=None, state_bytes_per_entry: int = 64,
                 loss_on_link_break: bool = False, graph_provider: Callable[[], ConnectivityGraph] | None = None,
                 retry_limit: int = 3, retry_spacing_ms: int = 500,
                 default_link: LinkResources | None = None):
        self.engine = engine
        self.nodes = set(nodes)
        self.code_bytes = dict(DEFAULT_CODE_BYTES)
        if code_bytes:
            self.code_bytes.update(code_bytes)
        self.state_bytes_per_entry = state_bytes_per_entry
        self.loss_on_link_break = loss_on_link_break
        self.graph_provider = graph_provider
        self.retry_limit = retry_limit
        self.retry_spacing_ms = retry_spacing_ms
        self.default_link = default_link or LinkResources(1000, 0, 5)

        self.agents: dict[str, AgentRecord] = {}
        self.lifelog: list[LifeLogEntry] = []
        self.directory: dict[str, DirectoryEntry] = {}
        self.checkpoints: dict[str, AgentRecord] = {}
        self.in_flight: dict[str, MigrationTicket] = {}
        self.subscriptions: dict[str, dict[str, Callable]] = {}
        self.behaviors: dict[AgentKind, Behavior] = {}
        self._ids = itertools.count()
        self.bytes_moved = 0

        engine.on(EventKind.AGENT_ARRIVAL, self._on_arrival)
        engine.on(EventKind.MIGRATION_RETRY, self._on_retry)

    # -- helpers ---------------------------------------------------------

    def _rec(self, agent) -> AgentRecord:
        if isinstance(agent, AgentRecord):
            return agent
        try:
            return self.agents[agent]
        except KeyError:
            raise NotFound(agent) from None

    def _now(self, t):
        return self.engine.clock if t is None else t

    def _log(self, a: AgentRecord, state: AgentState, node: NodeId, t: int) -> None:
        self.lifelog.append(LifeLogEntry(a.agent_id, a.kind, state, node, t))

    def agent_size(self, agent) -> int:
        a = self._rec(agent)
        return self.code_bytes[a.kind] + self.state_bytes_per_entry * payload_entries(a.payload)

    def current_graph(self) -> ConnectivityGraph | None:
        return self.graph_provider() if self.graph_provider else None

    def live(self) -> list[AgentRecord]:
        return [a for a in self.agents.values() if a.state is not AgentState.DELETING]

    # -- lifecycle -------------------------------------------------------

    def create_agent(self, kind: AgentKind, owner: NodeId, payload=None, hop_budget: int | None = None,
                     t: int | None = None, at: NodeId | None = None) -> AgentRecord:
        at = owner if at is None else at
        for n in (owner, at):
            if n not in self.nodes:
                raise UnknownNode(str(n))
        if (hop_budget is not None) != (kind in BUDGETED_KINDS):
            raise InvariantViolation(
                f"{kind.value} agents {'require' if kind in BUDGETED_KINDS else 'must not carry'} a hop budget")
        if hop_budget is not None and hop_budget < 0:
            raise InvariantViolation("hop budget must be non-negative")
        t = self._now(t)
        aid = f"{kind.value}:{next(self._ids)}"
        a = AgentRecord(aid, kind, owner, AgentState.CREATING, at, payload, hop_budget)
        self.agents[aid] = a
        self._log(a, AgentState.CREATING, at, t)
        self.directory[aid] = DirectoryEntry(at, t)
        self.transition_state(a, AgentState.RUNNING, at, t)
        return a

    def transition_state(self, agent, new: AgentState, node: NodeId, t: int | None = None) -> AgentRecord:
        a = self._rec(agent)
        if not is_allowed(a.state, new):
            raise IllegalTransition(a.state, new)
        t = self._now(t)
        a.state = new
        a.location = node
        self._log(a, new, node, t)
        if new is AgentState.DELETING:
            self.directory.pop(a.agent_id, None)
            self.checkpoints.pop(a.agent_id, None)
            self.in_flight.pop(a.agent_id, None)
            for subs in self.subscriptions.values():
                subs.pop(a.agent_id, None)
        return a

    def delete(self, agent, t: int | None = None) -> AgentRecord:
        a = self._rec(agent)
        return self.transition_state(a, AgentState.DELETING, a.location, t)

    # -- migration -------------------------------------------------------

    def migrate_agent(self, agent, to: NodeId, graph: ConnectivityGraph, attempt: int = 1,
                      t: int | None = None) -> MigrationTicket:
        a = self._rec(agent)
        if a.state is not AgentState.RUNNING:
            raise NotRunning(f"{a.agent_id} is {a.state.value}")
        src = a.location
        if not graph.adjacent(src, to):
            raise NotAdjacent(f"{src} and {to} are not adjacent at t={graph.snapshot_time}")
        t = self._now(t)
        size = self.agent_size(a)
        link = graph.resources.get(src, self.default_link)
        arrive = t + transmission_delay(size, link)
        ticket = MigrationTicket(a.agent_id, src, to, attempt, t, arrive)
        self.transition_state(a, AgentState.RESUMING, to, t)
        self.checkpoints[a.agent_id] = copy.deepcopy(a)
        self.in_flight[a.agent_id] = ticket
        self.bytes_moved += size
        self.engine.trace.append(t, "migrate", agent=a.agent_id, kind=a.kind.value, src=str(src),
                                 dst=str(to), bytes=size, arrive=arrive, attempt=attempt)
        self.engine.schedule(arrive, EventKind.AGENT_ARRIVAL, a.agent_id, ticket=ticket)
        return ticket

    def restore_checkpoint(self, agent_id: str) -> AgentRecord:
        try:
            return copy.deepcopy(self.checkpoints[agent_id])
        except KeyError:
            raise NotFound(agent_id) from None

    def dispatch(self, agent, to: NodeId, on_fail: Callable[[AgentRecord], None] | None = None,
                 attempt: int = 1) -> MigrationTicket | None:
        """Queue-manager entry point: migrate now, or suspend and retry later."""
        a = self._rec(agent)
        graph = self.current_graph()
        try:
            return self.migrate_agent(a, to, graph, attempt=attempt)
        except NotAdjacent:
            pass
        t = self.engine.clock
        if attempt <= self.retry_limit:
            self.transition_state(a, AgentState.SUSPENDING, a.location, t)
            self.engine.trace.append(t, "migration_retry", agent=a.agent_id, src=str(a.location),
                                     dst=str(to), attempt=attempt)
            self.engine.schedule(t + self.retry_spacing_ms, EventKind.MIGRATION_RETRY, a.agent_id,
                                 to=to, attempt=attempt + 1, on_fail=on_fail)
        else:
            self.engine.trace.append(t, "migration_abandoned", agent=a.agent_id, kind=a.kind.value,
                                     src=str(a.location), dst=str(to), attempts=attempt)
            self.transition_state(a, AgentState.DELETING, a.location, t)
            if on_fail is not None:
                on_fail(a)
        return None

    def _on_retry(self, ev) -> None:
        a = self.agents.get(ev.target)
        if a is None or a.state is not AgentState.SUSPENDING:
            return
        self.transition_state(a, AgentState.RUNNING, a.location, ev.fire_at)
        self.dispatch(a, ev.data["to"], ev.data["on_fail"], ev.data["attempt"])

    def _on_arrival(self, ev) -> None:
        a = self.agents.get(ev.target)
        ticket: MigrationTicket = ev.data["ticket"]
        if a is None or a.state is not AgentState.RESUMING:
            return
        t = ev.fire_at
        self.in_flight.pop(a.agent_id, None)
        self.checkpoints.pop(a.agent_id, None)
        if self.loss_on_link_break:
            graph = self.current_graph()
            if graph is not None and not graph.adjacent(ticket.src, ticket.dst):
                self.engine.trace.append(t, "agent_lost", agent=a.agent_id, src=str(ticket.src),
                                         dst=str(ticket.dst))
                self.transition_state(a, AgentState.DELETING, ticket.dst, t)
                return
        self.transition_state(a, AgentState.RUNNING, ticket.dst, t)
        self.directory[a.agent_id] = DirectoryEntry(ticket.dst, t)
        behavior = self.behaviors.get(a.kind)
        if behavior is not None:
            behavior(a, ticket.dst, t)

    # -- cloning, naming, events -----------------------------------------

    def clone_agent(self, agent, n: int, t: int | None = None) -> list[AgentRecord]:
        a = self._rec(agent)
        if a.state is not AgentState.RUNNING:
            raise NotRunning(f"{a.agent_id} is {a.state.value}")
        if n < 1:
            raise ValueError("clone count must be positive")
        t = self._now(t)
        clones = []
        for _ in range(n):
            clones.append(self.create_agent(a.kind, a.owner, copy.deepcopy(a.payload), a.hop_budget,
                                            t, at=a.location))
        return clones

    def directory_lookup(self, name: str) -> NodeId:
        try:
            return self.directory[name].node
        except KeyError:
            raise NotFound(name) from None

    def subscribe(self, agent, topic: str, callback: Callable) -> None:
        a = self._rec(agent)
        self.subscriptions.setdefault(topic, {})[a.agent_id] = callback

    def post_event(self, topic: str, payload=None, t: int | None = None) -> int:
        t = self._now(t)
        delivered = 0
        for aid, callback in list(self.subscriptions.get(topic, {}).items()):
            a = self.agents[aid]
            if a.state is AgentState.SUSPENDING:
                self.transition_state(a, AgentState.RUNNING, a.location, t)
            callback(a, topic, payload, t)
            delivered += 1
        self.engine.trace.append(t, "event_posted", topic=topic, delivered=delivered)
        return delivered


LIFELOG_HEADER = ["agent_id", "kind", "state", "node", "time_ms"]


def write_lifelog_csv(entries, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(LIFELOG_HEADER)
        for e in entries:
            w.writerow([e.agent_id, e.kind.value, e.state.value, str(e.node), e.time])


def read_lifelog_csv(path) -> list[LifeLogEntry]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [LifeLogEntry(r["agent_id"], AgentKind(r["kind"]), AgentState(r["state"]),
                         NodeId.parse(r["node"]), int(r["time_ms"])) for r in rows]


def replay_lifelog(entries) -> dict[str, AgentState]:
    """Terminal state per agent, checking every step against the relation."""
    states: dict[str, AgentState] = {}
    last_time: dict[str, int] = {}
    for e in entries:
        prev = states.get(e.agent_id)
        if prev is None:
            if e.state is not AgentState.CREATING:
                raise InvariantViolation(f"{e.agent_id} first logged as {e.state.value}")
        elif not is_allowed(prev, e.state):
            raise IllegalTransition(prev, e.state)
        if e.time < last_time.get(e.agent_id, e.time):
            raise InvariantViolation(f"{e.agent_id} log goes back in time")
        states[e.agent_id] = e.state
        last_time[e.agent_id] = e.time
    return states
