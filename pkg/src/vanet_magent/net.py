"""Radio layer: node identities, unit-disk snapshots, link resources, delays."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import kernels
from .errors import UnknownNode

_KIND_CODE = {"dfa": 1, "vehicle": 2}
_PREFIX = {"dfa": "d", "vehicle": "v"}


@dataclass(frozen=True, order=True)
class NodeId:
    """A radio node. Sorts DFAs before vehicles, then by index."""

    kind: str
    index: int

    def __deepcopy__(self, memo):
        return self  # immutable

    def __post_init__(self):
        if self.kind not in _KIND_CODE:
            raise ValueError(f"unknown node kind {self.kind!r}")
        if self.index < 0:
            raise ValueError("node index must be non-negative")

    def __str__(self):
        return f"{_PREFIX[self.kind]}{self.index}"

    @property
    def is_dfa(self) -> bool:
        return self.kind == "dfa"

    @classmethod
    def parse(cls, text: str) -> "NodeId":
        text = text.strip()
        for kind, prefix in _PREFIX.items():
            if text.startswith(prefix) and text[1:].isdigit():
                return cls(kind, int(text[1:]))
        raise ValueError(f"bad node id {text!r} (expected d<N> or v<N>)")


def dfa(i: int) -> NodeId:
    return NodeId("dfa", i)


def vehicle(i: int) -> NodeId:
    return NodeId("vehicle", i)


@dataclass(frozen=True)
class LinkResources:
    bandwidth_kbps: int
    buffer_free: int
    base_latency_ms: int
    jitter_ms: int = 0
    loss_rate: float = 0.0

    def __deepcopy__(self, memo):
        return self  # immutable

    def __post_init__(self):
        if self.bandwidth_kbps <= 0:
            raise ValueError("bandwidth_kbps must be positive")
        if self.base_latency_ms <= 0:
            raise ValueError("base_latency_ms must be positive")
        if self.buffer_free < 0:
            raise ValueError("buffer_free must be non-negative")


def transmission_delay(payload_bytes: int, link: LinkResources) -> int:
    """Latency floor plus serialization time, rounded up to whole ms."""
    bits = payload_bytes * 8
    return link.base_latency_ms + -(-bits // link.bandwidth_kbps)


@dataclass(frozen=True)
class NodeProfile:
    """Configured (unloaded) capacity of one node."""

    bandwidth_kbps: int
    buffer_bytes: int
    base_latency_ms: int
    jitter_ms: int = 0
    loss_rate: float = 0.0
    load_min: float = 0.0
    load_max: float = 0.0


_FRAC_BITS = 53


class ResourceSampler:
    """Deterministic per-(node, time) load model keyed by the scenario seed."""

    def __init__(self, profiles: Mapping[NodeId, NodeProfile], seed: int):
        self.profiles = dict(profiles)
        self.seed = seed

    def load_fraction(self, node: NodeId, t: int) -> float:
        p = self.profiles[node]
        if p.load_max == p.load_min:
            return p.load_min
        h = kernels.hash4(self.seed, _KIND_CODE[node.kind], node.index, t)
        u = (h >> (64 - _FRAC_BITS)) / float(1 << _FRAC_BITS)
        return p.load_min + (p.load_max - p.load_min) * u

    def sample(self, node: NodeId, t: int) -> LinkResources:
        try:
            p = self.profiles[node]
        except KeyError:
            raise UnknownNode(str(node)) from None
        load = self.load_fraction(node, t)
        bw = max(1, p.bandwidth_kbps - int(p.bandwidth_kbps * load))
        buf = max(0, p.buffer_bytes - int(p.buffer_bytes * load))
        return LinkResources(bw, buf, p.base_latency_ms, p.jitter_ms, p.loss_rate)


def sample_link_resources(node: NodeId, t: int, sampler: ResourceSampler) -> LinkResources:
    return sampler.sample(node, t)


@dataclass(frozen=True)
class ConnectivityGraph:
    snapshot_time: int
    adjacency: Mapping[NodeId, tuple]
    resources: Mapping[NodeId, LinkResources] = field(default_factory=dict)

    @property
    def nodes(self) -> list[NodeId]:
        return sorted(self.adjacency)

    def neighbors(self, node: NodeId) -> tuple:
        return self.adjacency.get(node, ())

    def adjacent(self, a: NodeId, b: NodeId) -> bool:
        return b in self.adjacency.get(a, ())

    def edges(self) -> set[tuple[NodeId, NodeId]]:
        return {(a, b) for a, nbrs in self.adjacency.items() for b in nbrs if a < b}

    def without_edge(self, a: NodeId, b: NodeId) -> "ConnectivityGraph":
        adj = dict(self.adjacency)
        adj[a] = tuple(n for n in adj.get(a, ()) if n != b)
        adj[b] = tuple(n for n in adj.get(b, ()) if n != a)
        return ConnectivityGraph(self.snapshot_time, adj, self.resources)

    @classmethod
    def from_edges(cls, nodes, edges, resources=None, t: int = 0) -> "ConnectivityGraph":
        """Build a graph from an explicit edge list (scripted topologies)."""
        nbrs = {n: set() for n in nodes}
        for a, b in edges:
            if a == b:
                raise ValueError("self-loop in edge list")
            nbrs.setdefault(a, set()).add(b)
            nbrs.setdefault(b, set()).add(a)
        adj = {n: tuple(sorted(s)) for n, s in sorted(nbrs.items())}
        return cls(t, adj, dict(resources or {}))


def connectivity_snapshot(positions: Mapping[NodeId, tuple], range_m: float,
                          resources: Mapping[NodeId, LinkResources], t: int) -> ConnectivityGraph:
    if range_m <= 0:
        raise ValueError("range_m must be positive")
    order = sorted(positions)
    xs = [float(positions[n][0]) for n in order]
    ys = [float(positions[n][1]) for n in order]
    nbrs: dict[NodeId, list] = {n: [] for n in order}
    for i, j in kernels.unit_disk_pairs(xs, ys, float(range_m)):
        nbrs[order[i]].append(order[j])
        nbrs[order[j]].append(order[i])
    adj = {n: tuple(sorted(v)) for n, v in nbrs.items()}
    return ConnectivityGraph(t, adj, dict(resources))
