"""Replay semantics and the two graph orderings, checked against brute force."""

from __future__ import annotations

import math
import random

import pytest
from graphutil import brute_force_distances, make_graph, random_weighted_graph

from ppmchart.fixtures import chain_log
from ppmchart.logmodel import ElementTrace, EventLog, LogEvent
from ppmchart.replay import (
    OrderingUnavailable,
    ReplayError,
    arc_length,
    create_order_from_start,
    distance_from_start,
    replay,
)
from ppmchart.taxonomy import OperationCategory, category_of, resolve


def _log(*events: LogEvent) -> EventLog:
    by_el: dict[str, list[LogEvent]] = {}
    for ev in events:
        by_el.setdefault(ev.element_id, []).append(ev)
    return EventLog(
        traces=tuple(
            ElementTrace(eid, tuple(sorted(evs, key=lambda e: e.timestamp)))
            for eid, evs in by_el.items()
        )
    )


def _ev(name: str, eid: str, t: int, **kw) -> LogEvent:
    return LogEvent(name=name, timestamp=t, element_id=eid, **kw)


def test_replay_minimal_construction():
    log = _log(
        _ev("CREATE_START_EVENT", "s", 1, position=(0.0, 0.0)),
        _ev("CREATE_ACTIVITY", "a", 2, position=(3.0, 4.0)),
        _ev("CREATE_EDGE", "e", 3, edge_source="s", edge_target="a"),
    )
    graph = replay(log)
    assert set(graph.nodes) == {"s", "a"}
    assert set(graph.arcs) == {"e"}
    assert graph.arcs["e"].source == "s" and graph.arcs["e"].target == "a"
    assert graph.surviving == {"s", "a", "e"}
    assert graph.warnings == ()


def test_replay_deletion_leaves_dangling_arc():
    log = _log(
        _ev("CREATE_START_EVENT", "s", 1, position=(0.0, 0.0)),
        _ev("CREATE_ACTIVITY", "a", 2, position=(3.0, 4.0)),
        _ev("CREATE_EDGE", "e", 3, edge_source="s", edge_target="a"),
        _ev("DELETE_ACTIVITY", "a", 4),
    )
    graph = replay(log)
    assert graph.surviving == {"s"}
    assert graph.dangling() == {"e": "dangling-at-end"}
    assert graph.nodes["a"].deleted_at == 4


def test_replay_updates_positions_and_reconnects():
    log = _log(
        _ev("CREATE_START_EVENT", "s", 1, position=(0.0, 0.0)),
        _ev("CREATE_ACTIVITY", "a", 2, position=(10.0, 0.0)),
        _ev("CREATE_ACTIVITY", "b", 3, position=(20.0, 0.0)),
        _ev("CREATE_EDGE", "e", 4, edge_source="s", edge_target="a"),
        _ev("MOVE_ACTIVITY", "a", 5, position=(99.0, 1.0)),
        _ev("RECONNECT_EDGE", "e", 6, edge_target="b"),
        _ev("NAME_ACTIVITY", "a", 7, label_text="Check"),
        _ev("MOVE_EDGE_BENDPOINT", "e", 8),
    )
    graph = replay(log)
    assert graph.nodes["a"].last_position == (99.0, 1.0)
    assert graph.arcs["e"].source == "s" and graph.arcs["e"].target == "b"


def test_replay_duplicate_create_is_error():
    log = _log(
        _ev("CREATE_ACTIVITY", "a", 1),
        _ev("CREATE_ACTIVITY", "a", 2),
    )
    with pytest.raises(ReplayError):
        replay(log)


def test_replay_premature_event_is_best_effort_warning():
    log = _log(_ev("MOVE_ACTIVITY", "ghost", 1, position=(5.0, 5.0)))
    graph = replay(log)
    assert graph.warnings
    assert graph.nodes["ghost"].last_position == (5.0, 5.0)
    assert graph.nodes["ghost"].created_at is None


def test_replay_determinism():
    log = chain_log((2.0, 4.0, 1.5))
    first = replay(log)
    second = replay(log)
    assert first.dump() == second.dump()
    assert first.element_order == second.element_order


def test_replay_counts_match_single_pass_counter():
    rng = random.Random(5)
    names_nodes = ["CREATE_START_EVENT", "CREATE_ACTIVITY", "CREATE_XOR", "CREATE_END_EVENT"]
    for _ in range(30):
        events = []
        t = 0
        created: list[str] = []
        for i in range(50):
            t += rng.randint(1, 9)
            roll = rng.random()
            if roll < 0.5 or not created:
                eid = f"el{i}"
                if rng.random() < 0.3 and len(created) >= 2:
                    src, tgt = rng.sample(created, 2)
                    events.append(_ev("CREATE_EDGE", eid, t, edge_source=src, edge_target=tgt))
                else:
                    events.append(
                        _ev(rng.choice(names_nodes), eid, t, position=(float(i), float(i % 7)))
                    )
                created.append(eid)
            elif roll < 0.75:
                events.append(_ev("MOVE_ACTIVITY", rng.choice(created), t, position=(1.0, 2.0)))
            else:
                victim = rng.choice(created)
                kind = "DELETE_EDGE" if victim in _edge_ids(events) else "DELETE_ACTIVITY"
                events.append(_ev(kind, victim, t))
        log = _log(*events)
        graph = replay(log)
        # independent single-pass recount over the raw events
        create_names = {"CREATE_START_EVENT", "CREATE_ACTIVITY", "CREATE_XOR", "CREATE_END_EVENT"}
        expected_nodes = sum(1 for e in events if e.name in create_names)
        expected_arcs = sum(1 for e in events if e.name == "CREATE_EDGE")
        assert len([n for n in graph.nodes.values() if n.created_at is not None]) == expected_nodes
        assert len([a for a in graph.arcs.values() if a.created_at is not None]) == expected_arcs
        deleted = {e.element_id for e in events if category_other_delete(e.name)}
        assert {x.element_id for x in (*graph.nodes.values(), *graph.arcs.values())
                if x.deleted_at is not None} == deleted


def _edge_ids(events) -> set[str]:
    return {e.element_id for e in events if e.name == "CREATE_EDGE"}


def category_other_delete(name: str) -> bool:
    return category_of(resolve(name)) is OperationCategory.DELETE


# ---------------------------------------------------------------------------
# arc length


def test_arc_length_345():
    graph = make_graph(["n0", "n1"], [("e0", "n0", "n1")],
                       positions={"n0": (0.0, 0.0), "n1": (3.0, 4.0)})
    assert arc_length(graph.arcs["e0"], graph) == 5.0


def test_arc_length_coincident_and_fallback():
    graph = make_graph(["n0", "n1"], [("e0", "n0", "n1")],
                       positions={"n0": (7.0, 7.0), "n1": (7.0, 7.0)})
    assert arc_length(graph.arcs["e0"], graph) == 0.0
    assert arc_length(graph.arcs["e0"], graph, unit_fallback=True) == 1.0


def test_arc_length_missing_position_raises():
    graph = make_graph(["n0", "n1"], [("e0", "n0", "n1")], positions={"n0": (0.0, 0.0)})
    with pytest.raises(OrderingUnavailable):
        arc_length(graph.arcs["e0"], graph)


# ---------------------------------------------------------------------------
# distance from start


def test_distance_chain_example():
    # start --2--> a --4--> end: ranks 0, 1 (arc), 2, 4 (arc), 6
    graph = replay(chain_log((2.0, 4.0)))
    order = distance_from_start(graph)
    assert order.elements == ("s0", "ed1", "a1", "ed2", "e0")
    assert order.ranks == {"s0": 0, "ed1": 1.0, "a1": 2.0, "ed2": 4.0, "e0": 6.0}
    assert not order.unit_lengths


def test_distance_lone_start_node():
    graph = make_graph(["n0"], [], positions={"n0": (0.0, 0.0)})
    order = distance_from_start(graph)
    assert order.elements == ("n0",)
    assert order.ranks["n0"] == 0


def test_distance_no_start_raises():
    graph = make_graph([], [])
    with pytest.raises(OrderingUnavailable):
        distance_from_start(graph)


def test_distance_unit_fallback_flag_for_positionless_logs():
    graph = make_graph(["n0", "n1"], [("e0", "n0", "n1")])
    order = distance_from_start(graph)
    assert order.unit_lengths
    assert order.ranks == {"n0": 0, "n1": 1, "e0": 0.5}


def test_distance_ranks_match_brute_force_on_100_random_graphs():
    rng = random.Random(99)
    for _ in range(100):
        graph, weights = random_weighted_graph(rng)
        length_fn = lambda arc: weights[arc.element_id]
        order = distance_from_start(graph, length_fn=length_fn)
        expected = brute_force_distances(graph, weights, ["n0"])
        for nid in graph.nodes:
            got = order.ranks[nid]
            if nid in expected:
                assert got == expected[nid], nid
            else:
                assert got == math.inf


def test_distance_triangle_property():
    rng = random.Random(7)
    for _ in range(40):
        graph, weights = random_weighted_graph(rng)
        order = distance_from_start(graph, length_fn=lambda a: weights[a.element_id])
        for arc in graph.arcs.values():
            ru, rv = order.ranks[arc.source], order.ranks[arc.target]
            if ru != math.inf:
                assert rv <= ru + weights[arc.element_id]


def test_distance_scaling_invariance():
    log = chain_log((2.0, 4.0, 3.0, 1.0))
    graph = replay(log)
    base = distance_from_start(graph)
    for node in graph.nodes.values():
        x, y = node.last_position
        node.last_position = (x * 17.0, y * 17.0)
    scaled = distance_from_start(graph)
    assert scaled.elements == base.elements


def test_distance_ties_keep_log_record_order():
    # two parallel branches of identical geometry tie at every rank
    positions = {"n0": (0.0, 0.0), "n1": (5.0, 5.0), "n2": (5.0, -5.0)}
    graph = make_graph(
        ["n0", "n1", "n2"],
        [("e0", "n0", "n1"), ("e1", "n0", "n2")],
        positions=positions,
    )
    order = distance_from_start(graph)
    assert order.elements == ("n0", "e0", "e1", "n1", "n2")


# ---------------------------------------------------------------------------
# create order from start


def test_create_order_chain_formula():
    graph = replay(chain_log((2.0,)))
    order = create_order_from_start(graph)
    assert order.ranks["ed1"] == max(0, 2.0) + 1
    assert order.elements == ("s0", "e0", "ed1")


def test_create_order_equal_rank_endpoints():
    positions = {"n0": (0.0, 0.0), "n1": (5.0, 5.0), "n2": (5.0, -5.0)}
    graph = make_graph(
        ["n0", "n1", "n2"],
        [("e0", "n0", "n1"), ("e1", "n0", "n2"), ("e2", "n1", "n2")],
        positions=positions,
    )
    order = create_order_from_start(graph)
    d = order.ranks["n1"]
    assert order.ranks["n2"] == d
    assert order.ranks["e2"] == d + 1


def test_create_order_arcs_after_endpoints_on_100_random_graphs():
    rng = random.Random(123)
    for _ in range(100):
        graph, weights = random_weighted_graph(rng)
        order = create_order_from_start(graph, length_fn=lambda a: weights[a.element_id])
        pos = {eid: i for i, eid in enumerate(order.elements)}
        for arc in graph.arcs.values():
            assert pos[arc.element_id] > pos[arc.source]
            assert pos[arc.element_id] > pos[arc.target]


def test_orders_are_permutations_of_log_elements():
    log = chain_log((2.0, 4.0))
    graph = replay(log)
    everything = {t.element_id for t in log.traces}
    for order in (distance_from_start(graph), create_order_from_start(graph)):
        assert set(order.elements) == everything
        assert len(order.elements) == len(everything)
        ranks = [order.ranks[e] for e in order.elements]
        assert ranks == sorted(ranks)
