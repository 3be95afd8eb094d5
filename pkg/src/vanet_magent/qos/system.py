"""Agent behaviours of the QoS scheme.

DFAs launch forward portable agents (FPAs) that flood outward under a hop
budget collecting per-node resources; an FPA that reaches another DFA turns
into a reverse portable agent (RPA) that walks the path back and deposits a
:class:`PathRecord` in the origin's routing table. Observant agents (OAs)
spread alerts by cloning, in-vehicle agents (IVAs) report vehicle status to
the nearest DFA, and information-finding agents (IFAs) hop from DFA to DFA
looking for a key.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Callable

from ..agents import AgentKind, AgentRecord, AgentRuntime, AgentState
from ..errors import NoFeasiblePath, NoNeighbors, RouteBroken
from ..net import ConnectivityGraph, LinkResources, NodeId, ResourceSampler
from .tables import (PathRecord, QosRequirement, RoutingTable, build_path_record, evict_stale,
                     select_qos_path, update_routing_table)


@dataclass
class FpaPayload:
    origin_dfa: NodeId
    visited: list[tuple[NodeId, LinkResources]]

    def entry_count(self) -> int:
        return len(self.visited)

    @property
    def nodes(self) -> list[NodeId]:
        return [n for n, _ in self.visited]


@dataclass
class RpaPayload:
    discovered_path: tuple[NodeId, ...]
    resources: tuple[LinkResources, ...]
    reverse_cursor: int

    def entry_count(self) -> int:
        return len(self.discovered_path)


@dataclass(frozen=True)
class AlertMessage:
    alert_id: str
    category: str
    origin: NodeId
    issued_at: int
    body: str = ""

    def __deepcopy__(self, memo):
        return self  # immutable


ALERT_CATEGORIES = ("accident", "jam", "weather", "vehicle-trace")


@dataclass
class OaPayload:
    alert: AlertMessage


@dataclass(frozen=True)
class VehicleStatus:
    vehicle: NodeId
    status: str
    position: tuple[float, float]
    sampled_at: int

    def __deepcopy__(self, memo):
        return self  # immutable


@dataclass
class IvaPayload:
    alerts: list[str] = field(default_factory=list)
    last_status: VehicleStatus | None = None


@dataclass
class InfoQuery:
    query_id: str
    requester: NodeId
    key: str
    issued_at: int
    answer: str | None = None
    answered_at: int | None = None

    def set_answer(self, value: str) -> None:
        if self.answer is not None:
            raise ValueError(f"query {self.query_id} already answered")
        self.answer = value


@dataclass
class IfaPayload:
    query_id: str
    key: str
    requester: NodeId
    requirement: QosRequirement
    trail: list[NodeId]
    visited_dfas: list[NodeId] = field(default_factory=list)
    route: list[NodeId] = field(default_factory=list)
    returning: bool = False

    def entry_count(self) -> int:
        return len(self.trail)


@dataclass(frozen=True)
class StepResult:
    action: str
    spawned: tuple = ()
    record: PathRecord | None = None


class QosAgentSystem:
    def __init__(self, runtime: AgentRuntime, sampler: ResourceSampler, dfa_nodes,
                 graph_provider: Callable[[], ConnectivityGraph], *, hop_budget: int = 6,
                 table_cap: int = 8, cache_cap: int = 16, period_ms: int = 10_000,
                 stale_periods: int = 3, fpa_dfa_check_first: bool = False,
                 info: dict[NodeId, set[str]] | None = None,
                 vehicle_provider: Callable[[NodeId], object] | None = None,
                 position_provider: Callable[[NodeId], tuple] | None = None):
        self.runtime = runtime
        self.engine = runtime.engine
        self.trace = runtime.engine.trace
        self.sampler = sampler
        self.dfas = sorted(dfa_nodes)
        self._dfa_set = set(self.dfas)
        self.graph_provider = graph_provider
        self.hop_budget = hop_budget
        self.table_cap = table_cap
        self.period_ms = period_ms
        self.stale_periods = stale_periods
        self.fpa_dfa_check_first = fpa_dfa_check_first
        self.vehicle_provider = vehicle_provider
        self.position_provider = position_provider

        self.tables = {d: RoutingTable(d) for d in self.dfas}
        self.caches: dict[NodeId, deque] = defaultdict(lambda: deque(maxlen=cache_cap))
        self.dfa_inbox: dict[NodeId, dict[NodeId, list]] = {d: {} for d in self.dfas}
        self.seen: dict[NodeId, set[str]] = defaultdict(set)
        self.receipts: dict[str, dict[NodeId, int]] = {}
        self.alert_db: dict[NodeId, list[str]] = defaultdict(list)
        self.vehicle_db: dict[NodeId, dict[NodeId, VehicleStatus]] = {d: {} for d in self.dfas}
        self.iva_of: dict[NodeId, str] = {}
        self.info = {d: set(info.get(d, ())) if info else set() for d in self.dfas}
        self.queries: dict[str, InfoQuery] = {}
        self._alert_ids = 0
        self._query_ids = 0

        runtime.behaviors[AgentKind.FPA] = lambda a, here, t: self.fpa_step(a, here, t=t)
        runtime.behaviors[AgentKind.RPA] = lambda a, here, t: self.rpa_step(a, here, t)
        runtime.behaviors[AgentKind.OA] = lambda a, here, t: self.oa_disseminate_step(a, here, t=t)
        runtime.behaviors[AgentKind.IFA] = self._ifa_arrived

    # -- shared ----------------------------------------------------------

    def is_dfa(self, node: NodeId) -> bool:
        return node in self._dfa_set

    def _graph(self, graph):
        return self.graph_provider() if graph is None else graph

    def _now(self, t):
        return self.engine.clock if t is None else t

    def max_path_hops(self) -> int:
        """Longest path a discovery round can record under the active check order."""
        return self.hop_budget if self.fpa_dfa_check_first else self.hop_budget - 1

    # -- discovery -------------------------------------------------------

    def launch_discovery(self, dfa: NodeId, graph: ConnectivityGraph | None = None,
                         hop_budget: int | None = None, t: int | None = None) -> list[AgentRecord]:
        """Send one FPA toward every current neighbour of ``dfa``."""
        if not self.is_dfa(dfa):
            raise ValueError(f"{dfa} is not a DFA node")
        budget = self.hop_budget if hop_budget is None else hop_budget
        if budget < 1:
            raise ValueError("hop budget must be >= 1")
        graph = self._graph(graph)
        t = self._now(t)
        nbrs = graph.neighbors(dfa)
        if not nbrs:
            self.trace.append(t, "no_neighbors", dfa=str(dfa), error=NoNeighbors.__name__)
            return []
        here = (dfa, self.sampler.sample(dfa, t))
        fpas = []
        for n in nbrs:
            fpa = self.runtime.create_agent(AgentKind.FPA, dfa, FpaPayload(dfa, [here]), budget, t)
            fpas.append(fpa)
            self.runtime.dispatch(fpa, n)
        self.trace.append(t, "discovery_launch", dfa=str(dfa), fpas=len(fpas), hop_budget=budget)
        return fpas

    def reachable_pairs(self, graph: ConnectivityGraph) -> list[tuple[NodeId, NodeId]]:
        """Ordered DFA pairs joined by a short enough path with no DFA in between."""
        limit = self.max_path_hops()
        pairs = []
        for d in self.dfas:
            dist = {d: 0}
            frontier = [d]
            found = set()
            while frontier and dist[frontier[0]] < limit:
                nxt = []
                for u in frontier:
                    for v in graph.neighbors(u):
                        if v in dist:
                            continue
                        dist[v] = dist[u] + 1
                        if self.is_dfa(v):
                            found.add(v)
                        else:
                            nxt.append(v)
                frontier = nxt
            pairs.extend((d, x) for x in sorted(found))
        return pairs

    def discovery_round(self, t: int | None = None) -> int:
        t = self._now(t)
        graph = self.graph_provider()
        if self.stale_periods:
            cutoff = t - self.stale_periods * self.period_ms
            for d in self.dfas:
                gone = evict_stale(self.tables[d], cutoff)
                if gone:
                    self.trace.append(t, "routes_evicted", dfa=str(d), count=gone)
        pairs = self.reachable_pairs(graph)
        self.trace.append(t, "discovery_round", reachable=";".join(f"{a}>{b}" for a, b in pairs),
                          reachable_count=len(pairs))
        return sum(len(self.launch_discovery(d, graph, t=t)) for d in self.dfas)

    def fpa_step(self, agent: AgentRecord, here: NodeId, graph: ConnectivityGraph | None = None,
                 t: int | None = None) -> StepResult:
        """One forward-agent evaluation at ``here``; by default the budget check runs before the destination check."""
        graph = self._graph(graph)
        t = self._now(t)
        p: FpaPayload = agent.payload
        p.visited.append((here, self.sampler.sample(here, t)))
        reached = self.is_dfa(here) and here != p.origin_dfa

        if self.fpa_dfa_check_first and reached:
            return self._fpa_deliver(agent, here, t)
        if agent.hop_budget == 1:
            self.runtime.delete(agent, t)
            return StepResult("delete")
        if reached:
            return self._fpa_deliver(agent, here, t)

        agent.hop_budget -= 1
        seen = set(p.nodes)
        targets = [n for n in graph.neighbors(here) if n not in seen]
        clones = []
        if targets:
            clones = self.runtime.clone_agent(agent, len(targets), t)
            for c, n in zip(clones, targets):
                self.runtime.dispatch(c, n)
        self.runtime.delete(agent, t)
        return StepResult("forward", tuple(clones))

    def _fpa_deliver(self, agent: AgentRecord, here: NodeId, t: int) -> StepResult:
        p: FpaPayload = agent.payload
        self.dfa_inbox[here][p.origin_dfa] = list(p.visited)
        nodes = tuple(p.nodes)
        res = tuple(r for _, r in p.visited)
        rpa = self.runtime.create_agent(AgentKind.RPA, here, RpaPayload(nodes, res, len(nodes) - 2), None, t)
        self.trace.append(t, "fpa_delivered", fpa=agent.agent_id, rpa=rpa.agent_id,
                          path=";".join(map(str, nodes)))
        self.runtime.delete(agent, t)
        self.rpa_step(rpa, here, t)
        return StepResult("rpa", (rpa,))

    def rpa_step(self, agent: AgentRecord, here: NodeId, t: int | None = None) -> StepResult:
        t = self._now(t)
        p: RpaPayload = agent.payload
        if here not in p.discovered_path:
            raise ValueError(f"{here} is not on the RPA's path")
        if here == p.discovered_path[0]:
            rec = build_path_record(p.discovered_path, p.resources, t)
            update_routing_table(self.tables[here], rec, self.table_cap)
            self.trace.append(t, "route_recorded", owner=str(here), dst=str(rec.dst_dfa),
                              path=";".join(map(str, rec.node_sequence)), hops=rec.hop_count,
                              bottleneck_kbps=rec.bottleneck_kbps, est_delay_ms=rec.est_delay_ms,
                              jitter_ms=rec.jitter_ms, loss=rec.worst_loss_rate)
            self.runtime.delete(agent, t)
            return StepResult("deposit-and-terminate", record=rec)
        self.caches[here].append(build_path_record(p.discovered_path, p.resources, t))
        nxt = p.discovered_path[p.reverse_cursor]
        p.reverse_cursor -= 1
        self.runtime.dispatch(agent, nxt, on_fail=self._rpa_broken)
        return StepResult("deposit-and-travel")

    def _rpa_broken(self, agent: AgentRecord) -> None:
        p: RpaPayload = agent.payload
        self.trace.append(self.engine.clock, "route_broken", agent=agent.agent_id, error=RouteBroken.__name__,
                          path=";".join(map(str, p.discovered_path)))

    # -- alerts ----------------------------------------------------------

    def raise_alert(self, origin: NodeId, category: str, hop_budget: int, body: str = "",
                    t: int | None = None) -> AgentRecord:
        if category not in ALERT_CATEGORIES:
            raise ValueError(f"unknown alert category {category!r}")
        t = self._now(t)
        self._alert_ids += 1
        alert = AlertMessage(f"A{self._alert_ids}", category, origin, t, body)
        self.receipts[alert.alert_id] = {}
        oa = self.runtime.create_agent(AgentKind.OA, origin, OaPayload(alert), hop_budget, t)
        self.trace.append(t, "alert_raised", alert=alert.alert_id, origin=str(origin), alert_category=category,
                          hop_budget=hop_budget)
        self.oa_disseminate_step(oa, origin, t=t)
        return oa

    def oa_disseminate_step(self, agent: AgentRecord, here: NodeId, graph: ConnectivityGraph | None = None,
                            t: int | None = None) -> StepResult:
        graph = self._graph(graph)
        t = self._now(t)
        alert = agent.payload.alert
        if alert.alert_id in self.seen[here]:
            self.runtime.delete(agent, t)
            return StepResult("suppressed")
        self.seen[here].add(alert.alert_id)
        got = self.receipts.setdefault(alert.alert_id, {})
        got[here] = t
        if here in self.iva_of:
            iva = self.runtime.agents[self.iva_of[here]]
            iva.payload.alerts.append(alert.alert_id)
        else:
            self.alert_db[here].append(alert.alert_id)
        self.trace.append(t, "alert_delivered", alert=alert.alert_id, node=str(here),
                          latency=t - alert.issued_at, covered=len(got))
        clones = []
        if agent.hop_budget > 1:
            agent.hop_budget -= 1
            nbrs = graph.neighbors(here)
            if nbrs:
                clones = self.runtime.clone_agent(agent, len(nbrs), t)
                for c, n in zip(clones, nbrs):
                    self.runtime.dispatch(c, n)
        self.runtime.delete(agent, t)
        return StepResult("deliver", tuple(clones))

    # -- vehicle reports -------------------------------------------------

    def install_iva(self, vehicle: NodeId, t: int = 0) -> AgentRecord:
        iva = self.runtime.create_agent(AgentKind.IVA, vehicle, IvaPayload(), None, t)
        self.iva_of[vehicle] = iva.agent_id
        return iva

    def nearest_dfa(self, node: NodeId, graph: ConnectivityGraph) -> tuple[NodeId, int] | None:
        """Closest DFA by hop count (ties: smallest DFA index), or None."""
        dist = {node: 0}
        level = [node]
        hops = 0
        while level:
            hits = [n for n in level if self.is_dfa(n)]
            if hits:
                return min(hits), hops
            nxt = []
            for u in level:
                for v in graph.neighbors(u):
                    if v not in dist:
                        dist[v] = hops + 1
                        nxt.append(v)
            level = nxt
            hops += 1
        return None

    def iva_sample_report(self, vehicle: NodeId, t: int | None = None,
                          graph: ConnectivityGraph | None = None) -> VehicleStatus | None:
        if vehicle not in self.iva_of:
            raise ValueError(f"{vehicle} has no resident IVA")
        graph = self._graph(graph)
        t = self._now(t)
        v = self.vehicle_provider(vehicle)
        status = VehicleStatus(vehicle, v.status, self.position_provider(vehicle), t)
        self.runtime.agents[self.iva_of[vehicle]].payload.last_status = status
        hit = self.nearest_dfa(vehicle, graph)
        if hit is None:
            self.trace.append(t, "iva_unreachable", vehicle=str(vehicle))
            return None
        d, hops = hit
        self.vehicle_db[d][vehicle] = status
        self.trace.append(t, "iva_report", vehicle=str(vehicle), dfa=str(d), hops=hops, status=status.status)
        return status

    # -- information queries ---------------------------------------------

    def issue_query(self, requester: NodeId, key: str, hop_budget: int,
                    requirement: QosRequirement | None = None, t: int | None = None) -> InfoQuery:
        if not self.is_dfa(requester):
            raise ValueError("queries are issued by DFA nodes")
        t = self._now(t)
        self._query_ids += 1
        q = InfoQuery(f"Q{self._query_ids}", requester, key, t)
        self.queries[q.query_id] = q
        payload = IfaPayload(q.query_id, key, requester, requirement or QosRequirement(), [requester])
        ifa = self.runtime.create_agent(AgentKind.IFA, requester, payload, hop_budget, t)
        self.trace.append(t, "query_issued", query=q.query_id, requester=str(requester), key=key)
        self.ifa_step(ifa, requester, t)
        return q

    def _ifa_arrived(self, agent: AgentRecord, here: NodeId, t: int) -> None:
        p: IfaPayload = agent.payload
        if not p.returning:
            p.trail.append(here)
        if p.route:
            self.runtime.dispatch(agent, p.route.pop(0), on_fail=self._ifa_broken)
        elif p.returning:
            self._ifa_complete(agent, t)
        else:
            self.ifa_step(agent, here, t)

    def ifa_step(self, agent: AgentRecord, here: NodeId, t: int | None = None) -> StepResult:
        t = self._now(t)
        p: IfaPayload = agent.payload
        q = self.queries[p.query_id]
        if here not in p.visited_dfas:
            p.visited_dfas.append(here)
        if p.key in self.info.get(here, ()):
            q.set_answer(f"{p.key}@{here}")
            self.trace.append(t, "query_found", query=q.query_id, dfa=str(here))
            p.returning = True
            back = list(reversed(p.trail))[1:]
            if not back:
                self._ifa_complete(agent, t)
                return StepResult("answered")
            p.route = back[1:]
            self.runtime.dispatch(agent, back[0], on_fail=self._ifa_broken)
            return StepResult("return")
        if agent.hop_budget <= 1:
            self._ifa_unanswered(agent, t, "budget")
            return StepResult("delete")
        rec = None
        for d in self.dfas:
            if d in p.visited_dfas:
                continue
            rec = select_qos_path(self.tables[here], d, p.requirement)
            if rec is not None:
                break
        if rec is None:
            self._ifa_unanswered(agent, t, NoFeasiblePath.__name__)
            return StepResult("delete")
        agent.hop_budget -= 1
        p.route = list(rec.node_sequence[2:])
        self.trace.append(t, "query_hop", query=q.query_id, src=str(here), dst=str(rec.dst_dfa))
        self.runtime.dispatch(agent, rec.node_sequence[1], on_fail=self._ifa_broken)
        return StepResult("travel", record=rec)

    def _ifa_complete(self, agent: AgentRecord, t: int) -> None:
        q = self.queries[agent.payload.query_id]
        q.answered_at = t
        self.trace.append(t, "query_answered", query=q.query_id, latency=t - q.issued_at)
        self.runtime.delete(agent, t)

    def _ifa_unanswered(self, agent: AgentRecord, t: int, reason: str) -> None:
        self.trace.append(t, "query_unanswered", query=agent.payload.query_id, reason=reason)
        if agent.state is not AgentState.DELETING:
            self.runtime.delete(agent, t)

    def _ifa_broken(self, agent: AgentRecord) -> None:
        self._ifa_unanswered(agent, self.engine.clock, "route_broken")
