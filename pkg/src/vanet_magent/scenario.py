"""Scenario assembly and end-to-end runs."""

from __future__ import annotations

import os
from dataclasses import dataclass

from .agents import AgentKind, AgentRuntime
from .config import ScenarioConfig, per_kind
from .metrics import MetricsSummary, compute_metrics
from .net import ConnectivityGraph, LinkResources, NodeId, NodeProfile, ResourceSampler, connectivity_snapshot
from .qos import QosAgentSystem, QosRequirement
from .road import Vehicle, advance_vehicle, build_road_network, place_vehicles, vehicle_xy
from .sim import Engine, EventKind


class World:
    """Every piece of simulation state for one scenario, wired to one engine."""

    def __init__(self, cfg: ScenarioConfig, seed: int | None = None, keep_history: bool = False):
        self.cfg = cfg
        self.seed = cfg.seed if seed is None else seed
        self.engine = Engine(self.seed)
        self.net = build_road_network(cfg.grid.rows, cfg.grid.cols, cfg.grid.block_m, cfg.dfa.placement)
        self.dfa_nodes = [NodeId("dfa", i) for i in range(len(self.net.dfa_sites))]
        self.vehicles: dict[NodeId, Vehicle] = {
            v.id: v for v in place_vehicles(cfg.vehicles.count, self.net, cfg.vehicles.speed_mps.min,
                                            cfg.vehicles.speed_mps.max, self.engine.rng)}
        self.sampler = ResourceSampler(self._profiles(), self.seed)
        self.keep_history = keep_history
        self.history: list[ConnectivityGraph] = []
        self.graph = self.snapshot(0)

        self.runtime = AgentRuntime(
            self.engine, self.nodes,
            code_bytes={k: getattr(cfg.agents.code_bytes, k.value) for k in AgentKind},
            state_bytes_per_entry=cfg.agents.state_bytes_per_entry,
            loss_on_link_break=cfg.migration.loss_on_link_break,
            graph_provider=lambda: self.graph,
            retry_limit=cfg.migration.retry_limit,
            retry_spacing_ms=cfg.migration.retry_spacing_ms,
            default_link=LinkResources(1, 0, cfg.radio.base_latency_ms),
        )
        info = {d: {f"traffic:{d}"} for d in self.dfa_nodes}
        for key, values in cfg.info.items():
            info[NodeId.parse(key)].update(values)
        self.qos = QosAgentSystem(
            self.runtime, self.sampler, self.dfa_nodes, lambda: self.graph,
            hop_budget=cfg.discovery.hop_budget, table_cap=cfg.discovery.table_cap,
            cache_cap=cfg.discovery.cache_cap, period_ms=cfg.discovery.period_ms,
            stale_periods=cfg.discovery.stale_periods,
            fpa_dfa_check_first=cfg.algorithms.fpa_dfa_check_first, info=info,
            vehicle_provider=self.vehicles.__getitem__, position_provider=self.position,
        )
        if cfg.duration_ms > 0:  # a zero-length run contains no instant to start agents at
            for d in self.dfa_nodes:
                self.runtime.create_agent(AgentKind.DFA, d, None, None, 0)
            for v in sorted(self.vehicles):
                self.qos.install_iva(v, 0)

        self.engine.on(EventKind.MOBILITY_TICK, self._on_mobility)
        self.engine.on(EventKind.DISCOVERY_ROUND, self._on_discovery)
        self.engine.on(EventKind.ALERT_RAISED, self._on_alert)
        self.engine.on(EventKind.QUERY_ISSUED, self._on_query)
        self.engine.trace.append(0, "scenario", nodes=len(self.nodes), dfas=len(self.dfa_nodes),
                                 vehicles=len(self.vehicles), duration_ms=cfg.duration_ms,
                                 hop_budget=cfg.discovery.hop_budget, range_m=cfg.radio.range_m)
        self.duration = cfg.duration_ms

    # -- topology --------------------------------------------------------

    @property
    def nodes(self) -> list[NodeId]:
        return self.dfa_nodes + sorted(self.vehicles)

    def _profiles(self) -> dict[NodeId, NodeProfile]:
        n = self.cfg.nodes
        out = {}
        for node in self.dfa_nodes + sorted(self.vehicles):
            out[node] = NodeProfile(
                bandwidth_kbps=per_kind(n.bandwidth_kbps, node.kind),
                buffer_bytes=per_kind(n.buffer_bytes, node.kind),
                base_latency_ms=self.cfg.radio.base_latency_ms,
                jitter_ms=per_kind(n.jitter_ms, node.kind),
                loss_rate=per_kind(n.loss_rate, node.kind),
                load_min=n.load_fraction.min, load_max=n.load_fraction.max,
            )
        return out

    def position(self, node: NodeId) -> tuple[float, float]:
        if node.is_dfa:
            return self.net.intersections[self.net.dfa_sites[node.index]]
        return vehicle_xy(self.vehicles[node], self.net)

    def snapshot(self, t: int) -> ConnectivityGraph:
        nodes = self.dfa_nodes + sorted(self.vehicles)
        positions = {n: self.position(n) for n in nodes}
        resources = {n: self.sampler.sample(n, t) for n in nodes}
        g = connectivity_snapshot(positions, self.cfg.radio.range_m, resources, t)
        if self.keep_history:
            self.history.append(g)
        return g

    # -- scheduling ------------------------------------------------------

    def schedule(self, duration: int | None = None, mobility: bool = True, discovery: bool = True) -> None:
        """Queue the first periodic events and every scripted alert/query."""
        self.duration = self.cfg.duration_ms if duration is None else duration
        if mobility and self.cfg.mobility.tick_ms < self.duration:
            self.engine.schedule(self.cfg.mobility.tick_ms, EventKind.MOBILITY_TICK, "world")
        if discovery and self.duration > 0:
            self.engine.schedule(0, EventKind.DISCOVERY_ROUND, "world")
        for a in self.cfg.alerts:
            if a.time_ms < self.duration:
                self.engine.schedule(a.time_ms, EventKind.ALERT_RAISED, a.origin, spec=a)
        for q in self.cfg.queries:
            if q.time_ms < self.duration:
                self.engine.schedule(q.time_ms, EventKind.QUERY_ISSUED, q.origin, spec=q)

    def _on_mobility(self, ev) -> None:
        dt = self.cfg.mobility.tick_ms
        for vid in sorted(self.vehicles):
            self.vehicles[vid] = advance_vehicle(self.vehicles[vid], dt, self.net, self.engine.rng)
        self.graph = self.snapshot(ev.fire_at)
        self.engine.trace.append(ev.fire_at, "topology", edges=len(self.graph.edges()))
        if ev.fire_at + dt < self.duration:
            self.engine.schedule(ev.fire_at + dt, EventKind.MOBILITY_TICK, "world")

    def _on_discovery(self, ev) -> None:
        self.qos.discovery_round(ev.fire_at)
        for v in sorted(self.vehicles):
            self.qos.iva_sample_report(v, ev.fire_at)
        nxt = ev.fire_at + self.cfg.discovery.period_ms
        if nxt < self.duration:
            self.engine.schedule(nxt, EventKind.DISCOVERY_ROUND, "world")

    def _on_alert(self, ev) -> None:
        a = ev.data["spec"]
        self.qos.raise_alert(NodeId.parse(a.origin), a.category, a.hop_budget, a.body, ev.fire_at)

    def _on_query(self, ev) -> None:
        q = ev.data["spec"]
        req = QosRequirement(q.qos.min_bandwidth_kbps, q.qos.max_delay_ms, q.qos.max_jitter_ms,
                             q.qos.max_loss_rate)
        self.qos.issue_query(NodeId.parse(q.origin), q.key, q.hop_budget, req, ev.fire_at)

    def run(self) -> int:
        return self.engine.run(until=self.duration)

    def metrics(self) -> MetricsSummary:
        return compute_metrics(self.engine.trace.records)


@dataclass
class ScenarioResult:
    world: World
    metrics: MetricsSummary
    files: dict[str, str]


def run_scenario(cfg: ScenarioConfig, out_dir: str | os.PathLike | None = None,
                 seed: int | None = None) -> ScenarioResult:
    from .reports import emit_reports

    world = World(cfg, seed=seed)
    world.schedule()
    world.run()
    metrics = world.metrics()
    files = emit_reports(world, out_dir) if out_dir is not None else {}
    return ScenarioResult(world, metrics, files)
