"""Shared test scaffolding: node shorthands, a scripted-topology rig, oracles."""

from collections import deque

from vanet_magent.agents import AgentRuntime
from vanet_magent.net import ConnectivityGraph, LinkResources, NodeId, NodeProfile, ResourceSampler
from vanet_magent.qos import QosAgentSystem
from vanet_magent.sim import Engine


def d(i):
    return NodeId("dfa", i)


def v(i):
    return NodeId("vehicle", i)


UNIFORM = LinkResources(bandwidth_kbps=8000, buffer_free=1000, base_latency_ms=5)


class Rig:
    """A runtime plus agent system over a hand-built, swappable topology."""

    def __init__(self, nodes, edges, dfas=None, *, seed=0, hop_budget=6, table_cap=0, check_first=False,
                 load=(0.0, 0.0), info=None, loss_on_link_break=False):
        self.engine = Engine(seed)
        self.nodes = list(nodes)
        profiles = {n: NodeProfile(8000, 1000, 5, jitter_ms=1, loss_rate=0.01, load_min=load[0], load_max=load[1])
                    for n in self.nodes}
        self.sampler = ResourceSampler(profiles, seed)
        self.graph = self.build(edges)
        self.runtime = AgentRuntime(self.engine, self.nodes, graph_provider=lambda: self.graph,
                                    loss_on_link_break=loss_on_link_break)
        dfas = [n for n in self.nodes if n.is_dfa] if dfas is None else dfas
        self.qos = QosAgentSystem(self.runtime, self.sampler, dfas, lambda: self.graph, hop_budget=hop_budget,
                                  table_cap=table_cap, fpa_dfa_check_first=check_first, info=info)

    def build(self, edges, t=0):
        return ConnectivityGraph.from_edges(self.nodes, edges, {n: self.sampler.sample(n, t) for n in self.nodes}, t)

    def set_edges(self, edges):
        self.graph = self.build(edges, self.engine.clock)

    def run(self, until=None):
        return self.engine.run(until)


def simple_paths(graph, origin, is_dfa, max_hops):
    """Every simple path from ``origin`` that ends at another DFA, passes through
    no DFA, and has at most ``max_hops`` hops (exhaustive DFS)."""
    out = set()

    def walk(path):
        if len(path) - 1 >= max_hops:
            return
        for nb in graph.neighbors(path[-1]):
            if nb in path:
                continue
            if is_dfa(nb):
                out.add(tuple(path + [nb]))
            else:
                walk(path + [nb])

    walk([origin])
    return out


def partial_paths(graph, origin, is_dfa, depth):
    """Number of simple paths of 1..depth hops from ``origin`` whose interior is DFA-free."""
    count = 0

    def walk(path):
        nonlocal count
        for nb in graph.neighbors(path[-1]):
            if nb in path:
                continue
            count += 1
            if not is_dfa(nb) and len(path) < depth:
                walk(path + [nb])

    walk([origin])
    return count


def bfs_reachable(graph, src):
    seen = {src}
    todo = deque([src])
    while todo:
        u = todo.popleft()
        for w in graph.neighbors(u):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def brute_select(records, req):
    """Linear scan: feasible records only, widest first, then fewer hops, then smaller sequence."""
    best = None
    for r in records:
        ok = (r.bottleneck_kbps >= req.min_bandwidth_kbps and r.est_delay_ms <= req.max_delay_ms
              and r.jitter_ms <= req.max_jitter_ms and r.worst_loss_rate <= req.max_loss_rate)
        if not ok:
            continue
        if best is None:
            best = r
            continue
        if r.bottleneck_kbps != best.bottleneck_kbps:
            better = r.bottleneck_kbps > best.bottleneck_kbps
        elif r.hop_count != best.hop_count:
            better = r.hop_count < best.hop_count
        else:
            better = r.node_sequence < best.node_sequence
        if better:
            best = r
    return best
