"""Client-server vs mobile-agent dispatch strategies over a multi-server task.

Each strategy has a closed-form cost and an event-driven execution on the
simulation engine; the two must agree exactly. Logical links have a fixed
per-leg latency and no serialization term.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass

from .errors import BadTask
from .sim import Engine, EventKind


class Strategy(enum.Enum):
    SEQ_CS = "SeqCS"
    SEQ_MA = "SeqMA"
    PAR_CS = "ParCS"
    PAR_MA = "ParMA"


@dataclass(frozen=True)
class TaskSpec:
    n: int
    q: int
    s: int
    c: int
    u: int
    p: int
    L: int
    k: int = 1

    def validate(self) -> None:
        if self.n < 1:
            raise BadTask("server_count must be >= 1")
        if min(self.q, self.s, self.c, self.u, self.p, self.L) < 0:
            raise BadTask("byte and time fields must be non-negative")
        if not 1 <= self.k <= self.n:
            raise BadTask(f"partitions k={self.k} must lie in [1, {self.n}]")


@dataclass(frozen=True)
class StrategyResult:
    strategy: Strategy
    total_latency_ms: int
    total_bytes: int
    message_count: int


def partition(n: int, k: int) -> list[int]:
    """Block sizes of n servers split into k contiguous, near-equal blocks."""
    base, extra = divmod(n, k)
    return [base + 1 if i < extra else base for i in range(k)]


def _seq_ma(m: int, t: TaskSpec) -> tuple[int, int, int]:
    latency = (m + 1) * t.L + m * t.p
    nbytes = (m + 1) * t.c + t.u * m * (m + 1) // 2
    return latency, nbytes, m + 1


def run_strategy(strategy: Strategy, task: TaskSpec) -> StrategyResult:
    task.validate()
    n = task.n
    if strategy is Strategy.SEQ_CS:
        return StrategyResult(strategy, n * (2 * task.L + task.p), n * (task.q + task.s), 2 * n)
    if strategy is Strategy.PAR_CS:
        return StrategyResult(strategy, 2 * task.L + task.p, n * (task.q + task.s), 2 * n)
    if strategy is Strategy.SEQ_MA:
        return StrategyResult(strategy, *_seq_ma(n, task))
    blocks = [_seq_ma(m, task) for m in partition(n, task.k)]
    return StrategyResult(strategy, max(b[0] for b in blocks), sum(b[1] for b in blocks),
                          sum(b[2] for b in blocks))


def simulate_strategy(strategy: Strategy, task: TaskSpec) -> StrategyResult:
    """Event-driven execution: every message or agent leg is a task-step event."""
    task.validate()
    eng = Engine(seed=0, trace_dispatch=False)
    tally = {"bytes": 0, "messages": 0, "done": 0}

    def send(nbytes: int, **data) -> None:
        tally["bytes"] += nbytes
        tally["messages"] += 1
        eng.schedule_in(task.L, EventKind.TASK_STEP, data.pop("who"), **data)

    def on_step(ev) -> None:
        d = ev.data
        if d["leg"] == "request":
            # server processes, then replies
            tally["bytes"] += task.s
            tally["messages"] += 1
            eng.schedule_in(task.p + task.L, EventKind.TASK_STEP, ev.target, leg="response", server=d["server"])
        elif d["leg"] == "response":
            tally["done"] += 1
            if strategy is Strategy.SEQ_CS and d["server"] + 1 < task.n:
                send(task.q, who="client", leg="request", server=d["server"] + 1)
        elif d["leg"] == "agent":
            itinerary, pos, visited = d["itinerary"], d["pos"], d["visited"]
            if pos == len(itinerary):
                tally["done"] += 1
                return
            size = task.c + (visited + 1) * task.u
            tally["bytes"] += size
            tally["messages"] += 1
            nxt = pos + 1
            eng.schedule_in(task.p + task.L, EventKind.TASK_STEP, ev.target, leg="agent",
                            itinerary=itinerary, pos=nxt, visited=visited + 1)

    eng.on(EventKind.TASK_STEP, on_step)

    if strategy is Strategy.SEQ_CS:
        send(task.q, who="client", leg="request", server=0)
    elif strategy is Strategy.PAR_CS:
        for i in range(task.n):
            send(task.q, who=f"thread{i}", leg="request", server=i)
    else:
        sizes = [task.n] if strategy is Strategy.SEQ_MA else partition(task.n, task.k)
        start = 0
        for j, m in enumerate(sizes):
            itinerary = tuple(range(start, start + m))
            start += m
            send(task.c, who=f"ma{j}", leg="agent", itinerary=itinerary, pos=0, visited=0)
    eng.run()
    return StrategyResult(strategy, eng.clock, tally["bytes"], tally["messages"])


def compare_strategies(task: TaskSpec) -> list[StrategyResult]:
    """All four strategies, fastest first (ties broken by fewer bytes)."""
    rows = [run_strategy(s, task) for s in Strategy]
    return sorted(rows, key=lambda r: (r.total_latency_ms, r.total_bytes))


BENCH_HEADER = ["strategy", "n", "q", "s", "c", "u", "L", "p", "k",
                "total_latency_ms", "total_bytes", "message_count"]


def write_bench_csv(rows: list[tuple[TaskSpec, StrategyResult]], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BENCH_HEADER)
        for task, r in rows:
            w.writerow([r.strategy.value, task.n, task.q, task.s, task.c, task.u, task.L, task.p, task.k,
                        r.total_latency_ms, r.total_bytes, r.message_count])
