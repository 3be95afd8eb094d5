import itertools
import random

import pytest

from helpers import brute_select, d, v
from vanet_magent.errors import WrongOwner
from vanet_magent.net import LinkResources
from vanet_magent.qos import (PathRecord, QosRequirement, RoutingTable, build_path_record, evict_stale,
                              select_qos_path, update_routing_table)


def rec(seq, bw=1000, delay=10, jitter=2, loss=0.01, t=0):
    seq = tuple(seq)
    return PathRecord(seq[-1], seq, len(seq) - 1, bw, 100, delay, loss, t, jitter)


class TestBuildRecord:
    def test_aggregates(self):
        res = [LinkResources(900, 50, 5, 1, 0.01), LinkResources(300, 70, 7, 2, 0.05),
               LinkResources(600, 20, 9, 3, 0.02)]
        r = build_path_record([d(0), v(1), d(1)], res, 40)
        assert (r.hop_count, r.bottleneck_kbps, r.min_buffer) == (2, 300, 20)
        assert r.est_delay_ms == 5 + 7  # one charge per hop, by the sending node
        assert r.jitter_ms == 6 and r.worst_loss_rate == 0.05
        assert r.dst_dfa == d(1) and r.owner == d(0) and r.discovered_at == 40

    def test_too_short(self):
        with pytest.raises(ValueError):
            build_path_record([d(0)], [LinkResources(1, 0, 1)], 0)


class TestUpdate:
    def test_first_entry(self):
        t = update_routing_table(RoutingTable(d(0)), rec([d(0), d(1)]))
        assert len(t) == 1

    def test_refresh_same_sequence(self):
        t = RoutingTable(d(0))
        update_routing_table(t, rec([d(0), v(0), d(1)], bw=100, t=0))
        update_routing_table(t, rec([d(0), v(0), d(1)], bw=700, t=5))
        assert len(t) == 1
        (only,) = t.records(d(1))
        assert (only.bottleneck_kbps, only.discovered_at) == (700, 5)

    def test_wrong_owner(self):
        with pytest.raises(WrongOwner):
            update_routing_table(RoutingTable(d(0)), rec([d(2), d(1)]))

    def test_cap_evicts_weakest(self):
        rng = random.Random(1)
        cands = [rec([d(0), v(i), d(1)], bw=bw) for i, bw in enumerate(rng.sample(range(100, 2000), 9))]
        t = RoutingTable(d(0))
        for r in cands:
            update_routing_table(t, r, cap=8)
        assert len(t) == 8
        survivors = sorted(cands, key=lambda r: r.bottleneck_kbps)[1:]
        assert set(t.records(d(1))) == set(survivors)

    def test_cap_zero_unbounded(self):
        t = RoutingTable(d(0))
        for i in range(30):
            update_routing_table(t, rec([d(0), v(i), d(1)]), cap=0)
        assert len(t) == 30

    def test_cap_is_per_destination(self):
        t = RoutingTable(d(0))
        for i in range(5):
            update_routing_table(t, rec([d(0), v(i), d(1)]), cap=3)
            update_routing_table(t, rec([d(0), v(i), d(2)]), cap=3)
        assert len(t.records(d(1))) == len(t.records(d(2))) == 3

    def test_evict_stale(self):
        t = RoutingTable(d(0))
        update_routing_table(t, rec([d(0), v(0), d(1)], t=0))
        update_routing_table(t, rec([d(0), v(1), d(1)], t=10))
        update_routing_table(t, rec([d(0), d(2)], t=0))
        assert evict_stale(t, 5) == 2
        assert [r.discovered_at for r in t.records()] == [10]
        assert d(2) not in t.entries


def random_table(rng, n):
    t = RoutingTable(d(0))
    seqs = set()
    while len(seqs) < n:
        k = rng.randint(0, 3)
        seqs.add((d(0),) + tuple(v(x) for x in rng.sample(range(8), k)) + (d(1),))
    for s in sorted(seqs):
        update_routing_table(t, rec(s, bw=rng.choice([100, 200, 300, 400]), delay=rng.randint(5, 40),
                                    jitter=rng.randint(0, 10), loss=rng.choice([0.0, 0.01, 0.1])), cap=0)
    return t


def random_req(rng):
    return QosRequirement(rng.choice([0, 150, 250, 350]), rng.choice([10, 20, 40, 10**9]),
                          rng.choice([3, 6, 10**9]), rng.choice([0.0, 0.05, 1.0]))


class TestSelect:
    def test_empty(self):
        assert select_qos_path(RoutingTable(d(0)), d(1), QosRequirement()) is None

    def test_single_feasible(self):
        t = RoutingTable(d(0))
        r = rec([d(0), d(1)])
        update_routing_table(t, r)
        assert select_qos_path(t, d(1), QosRequirement()) is r

    def test_infeasible_returns_none(self):
        t = RoutingTable(d(0))
        update_routing_table(t, rec([d(0), d(1)], bw=100))
        assert select_qos_path(t, d(1), QosRequirement(min_bandwidth_kbps=101)) is None

    def test_six_mixed_records_match_brute_force(self):
        rng = random.Random(2)
        t = random_table(rng, 6)
        for req in itertools.islice(iter(lambda: random_req(rng), None), 50):
            assert select_qos_path(t, d(1), req) == brute_select(t.records(d(1)), req)

    def test_tie_order(self):
        t = RoutingTable(d(0))
        a = rec([d(0), v(1), v(2), d(1)], bw=500)
        b = rec([d(0), v(3), d(1)], bw=500)
        c = rec([d(0), v(2), d(1)], bw=500)
        for r in (a, b, c):
            update_routing_table(t, r)
        assert select_qos_path(t, d(1), QosRequirement()) is c

    def test_bad_requirement(self):
        with pytest.raises(ValueError):
            QosRequirement(max_loss_rate=1.5)
