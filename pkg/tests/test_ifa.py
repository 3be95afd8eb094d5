import pytest

from helpers import Rig, d, v
from vanet_magent.agents import AgentKind, AgentState
from vanet_magent.qos import QosRequirement


def discovered(rig):
    rig.qos.discovery_round(0)
    rig.run()
    return rig


def walk_oracle(rig, origin, key, budget):
    """Smallest-index unvisited DFA with a feasible recorded path, one DFA per budget unit."""
    here, visited, order = origin, [origin], [origin]
    while key not in rig.qos.info[here]:
        if budget <= 1:
            return order, False
        options = [x for x in rig.qos.dfas if x not in visited and rig.qos.tables[here].records(x)]
        if not options:
            return order, False
        here = options[0]
        budget -= 1
        visited.append(here)
        order.append(here)
    return order, True


class TestIfa:
    def test_key_at_origin(self):
        rig = discovered(Rig([d(0), d(1)], [(d(0), d(1))], info={d(0): {"k"}}))
        q = rig.qos.issue_query(d(0), "k", 3)
        assert q.answer == "k@d0" and q.answered_at == q.issued_at
        assert not [r for r in rig.engine.trace.of("migrate") if r.payload["kind"] == "IFA"]

    def test_key_at_other_dfa(self):
        rig = discovered(Rig([d(0), d(1), v(0)], [(d(0), v(0)), (v(0), d(1))], info={d(1): {"k"}}))
        t0 = rig.engine.clock
        q = rig.qos.issue_query(d(0), "k", 3, t=t0)
        rig.run()
        assert q.answer == "k@d1"
        hops = rig.engine.trace.of("query_hop")
        assert [(h.payload["src"], h.payload["dst"]) for h in hops] == [("d0", "d1")]
        moves = [r.payload["dst"] for r in rig.engine.trace.of("migrate") if r.payload["kind"] == "IFA"]
        assert moves == ["v0", "d1", "v0", "d0"]
        assert rig.engine.trace.of("query_answered")[0].payload["latency"] > 0

    def test_four_dfa_walk(self):
        nodes = [d(i) for i in range(4)] + [v(0)]
        edges = [(d(i), v(0)) for i in range(4)] + [(d(0), d(1))]
        rig = discovered(Rig(nodes, edges, info={d(2): {"k"}}))
        order, ok = walk_oracle(rig, d(0), "k", 3)
        assert ok and order == [d(0), d(1), d(2)]
        q = rig.qos.issue_query(d(0), "k", 3, t=rig.engine.clock)
        rig.run()
        hops = [(h.payload["src"], h.payload["dst"]) for h in rig.engine.trace.of("query_hop")]
        assert hops == [(str(a), str(b)) for a, b in zip(order, order[1:])]
        assert q.answer == "k@d2"

    def test_budget_exhausted(self):
        nodes = [d(i) for i in range(4)] + [v(0)]
        edges = [(d(i), v(0)) for i in range(4)]
        rig = discovered(Rig(nodes, edges, info={d(3): {"k"}}))
        order, ok = walk_oracle(rig, d(0), "k", 2)
        assert not ok
        q = rig.qos.issue_query(d(0), "k", 2, t=rig.engine.clock)
        rig.run()
        assert q.answer is None
        assert rig.engine.trace.of("query_unanswered")[0].payload["reason"] == "budget"
        assert all(a.state is AgentState.DELETING for a in rig.runtime.agents.values()
                   if a.kind is AgentKind.IFA)

    def test_no_feasible_path(self):
        rig = discovered(Rig([d(0), d(1)], [(d(0), d(1))], info={d(1): {"k"}}))
        q = rig.qos.issue_query(d(0), "k", 3, QosRequirement(min_bandwidth_kbps=10**6), t=rig.engine.clock)
        rig.run()
        assert q.answer is None
        assert rig.engine.trace.of("query_unanswered")[0].payload["reason"] == "NoFeasiblePath"

    def test_answer_set_once(self):
        rig = discovered(Rig([d(0), d(1)], [(d(0), d(1))], info={d(0): {"k"}}))
        q = rig.qos.issue_query(d(0), "k", 3)
        with pytest.raises(ValueError):
            q.set_answer("again")
