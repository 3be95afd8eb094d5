"""Path records, multi-path routing tables and QoS-constrained selection."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import WrongOwner
from ..net import LinkResources, NodeId


@dataclass(frozen=True)
class PathRecord:
    dst_dfa: NodeId
    node_sequence: tuple[NodeId, ...]
    hop_count: int
    bottleneck_kbps: int
    min_buffer: int
    est_delay_ms: int
    worst_loss_rate: float
    discovered_at: int
    jitter_ms: int = 0
    node_resources: tuple[LinkResources, ...] = ()

    def __deepcopy__(self, memo):
        return self  # immutable

    @property
    def owner(self) -> NodeId:
        return self.node_sequence[0]


def build_path_record(nodes, resources, t: int) -> PathRecord:
    """Summarise a DFA-to-DFA path from the per-node resources collected on it.

    Each hop is charged the base latency of its transmitting node, so the
    delay sums over every node but the last.
    """
    nodes = tuple(nodes)
    resources = tuple(resources)
    if len(nodes) < 2 or len(nodes) != len(resources):
        raise ValueError("a path needs >= 2 nodes and one resource entry per node")
    return PathRecord(
        dst_dfa=nodes[-1],
        node_sequence=nodes,
        hop_count=len(nodes) - 1,
        bottleneck_kbps=min(r.bandwidth_kbps for r in resources),
        min_buffer=min(r.buffer_free for r in resources),
        est_delay_ms=sum(r.base_latency_ms for r in resources[:-1]),
        worst_loss_rate=max(r.loss_rate for r in resources),
        discovered_at=t,
        jitter_ms=sum(r.jitter_ms for r in resources),
        node_resources=resources,
    )


@dataclass
class RoutingTable:
    owner_dfa: NodeId
    entries: dict[NodeId, list[PathRecord]] = field(default_factory=dict)

    def records(self, dst: NodeId | None = None) -> list[PathRecord]:
        if dst is not None:
            return list(self.entries.get(dst, ()))
        return [r for d in sorted(self.entries) for r in self.entries[d]]

    def __len__(self):
        return sum(len(v) for v in self.entries.values())


def update_routing_table(table: RoutingTable, rec: PathRecord, cap: int = 8) -> RoutingTable:
    """Insert or refresh ``rec``; keep at most ``cap`` records per destination (0 = no cap)."""
    if rec.node_sequence[0] != table.owner_dfa:
        raise WrongOwner(f"path starts at {rec.node_sequence[0]}, table belongs to {table.owner_dfa}")
    bucket = table.entries.setdefault(rec.dst_dfa, [])
    for i, old in enumerate(bucket):
        if old.node_sequence == rec.node_sequence:
            bucket[i] = rec
            return table
    bucket.append(rec)
    if cap and len(bucket) > cap:
        victim = min(range(len(bucket)),
                     key=lambda i: (bucket[i].bottleneck_kbps, bucket[i].discovered_at, i))
        del bucket[victim]
    return table


def evict_stale(table: RoutingTable, oldest_allowed: int) -> int:
    """Drop records discovered before ``oldest_allowed``; returns the count removed."""
    removed = 0
    for dst in list(table.entries):
        keep = [r for r in table.entries[dst] if r.discovered_at >= oldest_allowed]
        removed += len(table.entries[dst]) - len(keep)
        if keep:
            table.entries[dst] = keep
        else:
            del table.entries[dst]
    return removed


@dataclass(frozen=True)
class QosRequirement:
    min_bandwidth_kbps: int = 0
    max_delay_ms: int = 10**9
    max_jitter_ms: int = 10**9
    max_loss_rate: float = 1.0

    def __deepcopy__(self, memo):
        return self  # immutable

    def __post_init__(self):
        if min(self.min_bandwidth_kbps, self.max_delay_ms, self.max_jitter_ms, self.max_loss_rate) < 0:
            raise ValueError("QoS bounds must be non-negative")
        if self.max_loss_rate > 1:
            raise ValueError("max_loss_rate must be <= 1")

    def admits(self, rec: PathRecord) -> bool:
        return (rec.bottleneck_kbps >= self.min_bandwidth_kbps
                and rec.est_delay_ms <= self.max_delay_ms
                and rec.jitter_ms <= self.max_jitter_ms
                and rec.worst_loss_rate <= self.max_loss_rate)


def select_qos_path(table: RoutingTable, dst: NodeId, req: QosRequirement) -> PathRecord | None:
    """Widest feasible path to ``dst``; ties go to fewer hops, then the smaller sequence."""
    feasible = [r for r in table.entries.get(dst, ()) if req.admits(r)]
    if not feasible:
        return None
    return min(feasible, key=lambda r: (-r.bottleneck_kbps, r.hop_count, r.node_sequence))

