import random

import pytest

from vanet_magent.bench import (BENCH_HEADER, Strategy, TaskSpec, compare_strategies, partition,
                                run_strategy, simulate_strategy, write_bench_csv)
from vanet_magent.errors import BadTask

EXAMPLE = dict(n=4, q=500, s=500, c=2000, u=100, L=10, p=5)


def accumulate(strategy, t):
    """Independent leg-by-leg tally of (latency, bytes, messages)."""
    if strategy is Strategy.SEQ_CS:
        lat = by = msg = 0
        for _ in range(t.n):
            lat += t.L + t.p + t.L
            by += t.q + t.s
            msg += 2
        return lat, by, msg
    if strategy is Strategy.PAR_CS:
        return t.L + t.p + t.L, t.n * (t.q + t.s), 2 * t.n
    blocks = [t.n] if strategy is Strategy.SEQ_MA else partition(t.n, t.k)
    worst = by = msg = 0
    for m in blocks:
        lat, carried = 0, 0
        for leg in range(m + 1):
            by += t.c + carried
            msg += 1
            lat += t.L
            if leg < m:
                lat += t.p
                carried += t.u
        worst = max(worst, lat)
    return worst, by, msg


def row(strategy, task):
    r = run_strategy(strategy, task)
    return r.total_latency_ms, r.total_bytes, r.message_count


class TestClosedForms:
    def test_single_server(self):
        t = TaskSpec(n=1, q=300, s=700, c=2000, u=40, L=10, p=5)
        assert row(Strategy.SEQ_CS, t) == (25, 1000, 2)
        assert row(Strategy.SEQ_MA, t) == (25, 4040, 2)

    def test_worked_example(self):
        t = TaskSpec(**EXAMPLE)
        assert run_strategy(Strategy.SEQ_CS, t).total_bytes == 4000
        assert run_strategy(Strategy.SEQ_MA, t).total_bytes == 11000
        assert run_strategy(Strategy.PAR_CS, t).total_latency_ms == 25
        assert run_strategy(Strategy.SEQ_CS, t).total_latency_ms == 100

    def test_full_fan_out(self):
        t = TaskSpec(**EXAMPLE, k=4)
        assert run_strategy(Strategy.PAR_MA, t).total_latency_ms == 2 * 10 + 5 \
            == run_strategy(Strategy.PAR_CS, t).total_latency_ms

    @pytest.mark.parametrize("n,k,want", [(4, 2, [2, 2]), (5, 2, [3, 2]), (7, 3, [3, 2, 2]), (3, 3, [1, 1, 1])])
    def test_partition(self, n, k, want):
        assert partition(n, k) == want

    def test_step_accumulation_oracle(self):
        rng = random.Random(4)
        for _ in range(300):
            n = rng.randint(1, 12)
            t = TaskSpec(n=n, q=rng.randint(0, 900), s=rng.randint(0, 900), c=rng.randint(0, 5000),
                         u=rng.randint(0, 300), L=rng.randint(0, 40), p=rng.randint(0, 40), k=rng.randint(1, n))
            for s in Strategy:
                assert row(s, t) == accumulate(s, t)

    def test_bad_task(self):
        for kw in (dict(n=0), dict(q=-1), dict(k=9)):
            with pytest.raises(BadTask):
                run_strategy(Strategy.SEQ_CS, TaskSpec(**{**EXAMPLE, **kw}))


class TestSimulation:
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_matches_closed_forms(self, k):
        t = TaskSpec(**EXAMPLE, k=k)
        for s in Strategy:
            assert simulate_strategy(s, t) == run_strategy(s, t)

    def test_random_tasks(self):
        rng = random.Random(9)
        for _ in range(100):
            n = rng.randint(1, 9)
            t = TaskSpec(n=n, q=rng.randint(0, 900), s=rng.randint(0, 900), c=rng.randint(0, 5000),
                         u=rng.randint(0, 300), L=rng.randint(0, 40), p=rng.randint(0, 40), k=rng.randint(1, n))
            for s in Strategy:
                assert simulate_strategy(s, t) == run_strategy(s, t)


class TestComparison:
    def test_four_rows(self):
        rows = compare_strategies(TaskSpec(**EXAMPLE, k=2))
        assert sorted(r.strategy.value for r in rows) == ["ParCS", "ParMA", "SeqCS", "SeqMA"]

    def test_example_ranking_follows_formulas(self):
        rows = compare_strategies(TaskSpec(**EXAMPLE, k=4))
        lat = {r.strategy: r.total_latency_ms for r in rows}
        assert lat[Strategy.PAR_CS] == lat[Strategy.PAR_MA] == 25
        assert lat[Strategy.SEQ_MA] == 70 < lat[Strategy.SEQ_CS] == 100
        assert [r.total_latency_ms for r in rows] == sorted(lat.values())

    def test_agent_traffic_advantage(self):
        t = TaskSpec(n=6, q=800, s=900, c=1200, u=0, L=10, p=5)
        assert (t.n + 1) * t.c < t.n * (t.q + t.s)
        assert run_strategy(Strategy.SEQ_MA, t).total_bytes < run_strategy(Strategy.SEQ_CS, t).total_bytes

    def test_par_ma_latency_non_increasing_in_k(self):
        for n in range(1, 13):
            lats = [run_strategy(Strategy.PAR_MA, TaskSpec(**{**EXAMPLE, "n": n}, k=k)).total_latency_ms
                    for k in range(1, n + 1)]
            assert lats == sorted(lats, reverse=True)

    def test_par_ma_single_block_is_seq_ma(self):
        t = TaskSpec(**EXAMPLE, k=1)
        assert row(Strategy.PAR_MA, t) == row(Strategy.SEQ_MA, t)


def test_bench_csv(tmp_path):
    t = TaskSpec(**EXAMPLE, k=2)
    write_bench_csv([(t, r) for r in compare_strategies(t)], tmp_path / "b.csv")
    lines = (tmp_path / "b.csv").read_text().splitlines()
    assert lines[0].split(",") == BENCH_HEADER and len(lines) == 5
