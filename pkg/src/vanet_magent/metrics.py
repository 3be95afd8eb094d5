"""Scenario metrics, computed from trace records alone."""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class MetricsSummary:
    discovery_success_ratio: float = 0.0
    dfa_pairs_reachable: int = 0
    dfa_pairs_discovered: int = 0
    paths_recorded: int = 0
    path_delay_mean_ms: float = 0.0
    path_delay_max_ms: int = 0
    path_jitter_mean_ms: float = 0.0
    alerts_raised: int = 0
    alert_coverage_ratio: float = 0.0
    alert_latency_mean_ms: float = 0.0
    queries_issued: int = 0
    query_answer_ratio: float = 0.0
    query_latency_mean_ms: float = 0.0
    migrations: int = 0
    agent_bytes_total: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


def _mean(xs) -> float:
    return sum(xs) / len(xs) if xs else 0.0


def compute_metrics(records) -> MetricsSummary:
    node_count = 0
    reachable: set[tuple[str, str]] = set()
    discovered: set[tuple[str, str]] = set()
    delays, jitters = [], []
    alerts = 0
    receipts, alert_latency = 0, []
    queries, answers, query_latency = 0, 0, []
    migrations, moved = 0, 0
    for r in records:
        c, p = r.category, r.payload
        if c == "scenario":
            node_count = p["nodes"]
        elif c == "discovery_round":
            if p["reachable"]:
                reachable.update(tuple(pair.split(">")) for pair in p["reachable"].split(";"))
        elif c == "route_recorded":
            discovered.add((p["owner"], p["dst"]))
            delays.append(p["est_delay_ms"])
            jitters.append(p["jitter_ms"])
        elif c == "alert_raised":
            alerts += 1
        elif c == "alert_delivered":
            receipts += 1
            alert_latency.append(p["latency"])
        elif c == "query_issued":
            queries += 1
        elif c == "query_answered":
            answers += 1
            query_latency.append(p["latency"])
        elif c == "migrate":
            migrations += 1
            moved += p["bytes"]
    pairs = reachable | discovered
    return MetricsSummary(
        discovery_success_ratio=len(discovered) / len(pairs) if pairs else 0.0,
        dfa_pairs_reachable=len(pairs),
        dfa_pairs_discovered=len(discovered),
        paths_recorded=len(delays),
        path_delay_mean_ms=_mean(delays),
        path_delay_max_ms=max(delays, default=0),
        path_jitter_mean_ms=_mean(jitters),
        alerts_raised=alerts,
        alert_coverage_ratio=receipts / (alerts * node_count) if alerts and node_count else 0.0,
        alert_latency_mean_ms=_mean(alert_latency),
        queries_issued=queries,
        query_answer_ratio=answers / queries if queries else 0.0,
        query_latency_mean_ms=_mean(query_latency),
        migrations=migrations,
        agent_bytes_total=moved,
    )
