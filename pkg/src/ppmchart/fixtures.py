"""Synthetic session-log generators for tests, demos and benchmarks.

Two families:

* ``session_log`` builds a realistic, validation-clean session around a chain
  model (start event, activities, gateway pairs, end event, connecting edges)
  padded with renames, moves and a few create+delete pairs to hit an exact
  operation count.  It returns the log together with its ground truth so
  analytics results can be checked against construction, not re-derivation.
* the ``*_log`` pattern generators build minimal logs that satisfy (or
  deliberately violate) one detector's rule by construction.

All generators are deterministic for a given seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .logmodel import ElementTrace, EventLog, LogEvent
from .taxonomy import OperationCategory, category_of, resolve

__all__ = [
    "SessionTruth",
    "chain_log",
    "chaos_log",
    "chunk_log",
    "delete_burst_log",
    "gateway_pairing_log",
    "move_timing_log",
    "orientation_log",
    "pause_log",
    "session_log",
]

MINUTE = 60_000
SECOND = 1_000


@dataclass(frozen=True)
class SessionTruth:
    """What the generator actually emitted, counted at emission time."""

    total_operations: int
    element_count: int
    activity_count: int
    category_counts: dict[str, int]
    duration_ms: int


class _Session:
    """Accumulates events on a shared clock; traces appear in first-touch order."""

    def __init__(self, log_id: str, t0: int = 1_353_490_000_000):
        self.log_id = log_id
        self.t = t0
        self.events: dict[str, list[LogEvent]] = {}

    def tick(self, ms: int) -> None:
        self.t += ms

    def emit(self, element_id: str, name: str, *, at: int | None = None, **kw) -> None:
        ev = LogEvent(name=name, timestamp=self.t if at is None else at, element_id=element_id, **kw)
        self.events.setdefault(element_id, []).append(ev)

    def build(self) -> EventLog:
        traces = tuple(
            ElementTrace(element_id=eid, events=tuple(sorted(evs, key=lambda e: e.timestamp)))
            for eid, evs in self.events.items()
        )
        return EventLog(log_id=self.log_id, traces=traces)


def _truth_of(log: EventLog, activity_count: int) -> SessionTruth:
    counts = {c.value: 0 for c in OperationCategory}
    stamps = []
    for tr in log.traces:
        for ev in tr.events:
            counts[category_of(resolve(ev.name)).value] += 1  # type: ignore[arg-type]
            stamps.append(ev.timestamp)
    return SessionTruth(
        total_operations=sum(counts.values()),
        element_count=len(log.traces),
        activity_count=activity_count,
        category_counts=counts,
        duration_ms=max(stamps) - min(stamps) if stamps else 0,
    )


_CREATE_BY_KIND = {
    "start": "CREATE_START_EVENT",
    "end": "CREATE_END_EVENT",
    "activity": "CREATE_ACTIVITY",
    "xor": "CREATE_XOR",
    "and": "CREATE_AND",
}
_MOVE_BY_KIND = {
    "start": "MOVE_START_EVENT",
    "end": "MOVE_END_EVENT",
    "activity": "MOVE_ACTIVITY",
    "xor": "MOVE_XOR",
    "and": "MOVE_AND",
}


def session_log(
    log_id: str,
    n_activities: int,
    n_ops: int,
    *,
    seed: int = 0,
    gateway_pairs: int = 2,
) -> tuple[EventLog, SessionTruth]:
    """A full modeling session with exactly ``n_ops`` recorded operations.

    The model is a snake-layout chain: start event, the activities with
    gateway pairs spliced in, end event, one edge between each consecutive
    pair.  Remaining operation budget is spent on renames, node moves and a
    few scrapped (created then deleted) activities.
    """
    rng = random.Random(seed)
    s = _Session(log_id)

    chain: list[tuple[str, str]] = [("s0", "start")]
    acts = [(f"a{i}", "activity") for i in range(1, n_activities + 1)]
    for pair in range(gateway_pairs):
        kind = "xor" if pair % 2 == 0 else "and"
        slot = (pair + 1) * len(acts) // (gateway_pairs + 1)
        acts.insert(min(slot + pair * 2, len(acts)), (f"g{2 * pair + 1}", kind))
        acts.insert(min(slot + pair * 2 + 2, len(acts)), (f"g{2 * pair + 2}", kind))
    chain.extend(acts)
    chain.append(("e0", "end"))

    n_nodes = len(chain)
    n_edges = n_nodes - 1
    base_creates = n_nodes + n_edges
    if n_ops < base_creates:
        raise ValueError(f"n_ops={n_ops} below the {base_creates} creations the model needs")

    def grid(i: int) -> tuple[float, float]:
        return (60.0 + (i % 10) * 130.0, 60.0 + (i // 10) * 110.0)

    # creation phase: nodes in chain order, edge right after its target node
    for i, (eid, kind) in enumerate(chain):
        s.tick(rng.randint(2, 6) * SECOND)
        s.emit(eid, _CREATE_BY_KIND[kind], position=grid(i))
        if i > 0:
            prev = chain[i - 1][0]
            s.tick(rng.randint(1, 3) * SECOND)
            s.emit(f"ed{i}", "CREATE_EDGE", edge_source=prev, edge_target=eid)

    budget = n_ops - base_creates

    # a couple of scrapped activities (create now, delete at the end)
    scrapped: list[str] = []
    while budget >= 2 and len(scrapped) < 2 and budget >= 6:
        eid = f"x{len(scrapped)}"
        s.tick(rng.randint(2, 5) * SECOND)
        s.emit(eid, "CREATE_ACTIVITY", position=grid(n_nodes + len(scrapped)))
        scrapped.append(eid)
        budget -= 2  # reserve the matching delete

    # renames on activities and edges
    renameable = [eid for eid, kind in chain if kind == "activity"]
    for i, eid in enumerate(renameable):
        if budget == 0:
            break
        s.tick(rng.randint(1, 4) * SECOND)
        s.emit(eid, "NAME_ACTIVITY", label_text=f"Task {i + 1}")
        budget -= 1

    # node moves fill the rest
    while budget > 0:
        eid, kind = chain[rng.randrange(len(chain))]
        s.tick(rng.randint(1, 4) * SECOND)
        s.emit(eid, _MOVE_BY_KIND[kind], position=grid(rng.randrange(n_nodes)))
        budget -= 1

    for eid in scrapped:
        s.tick(rng.randint(2, 5) * SECOND)
        s.emit(eid, "DELETE_ACTIVITY")

    log = s.build()
    truth = _truth_of(log, n_activities)
    assert truth.total_operations == n_ops
    return log, truth


def chain_log(lengths: tuple[float, ...] = (2.0, 4.0)) -> EventLog:
    """The minimal chain fixture: start -> activity -> ... with given arc lengths.

    Node positions sit on the x axis at the cumulative lengths, so shortest
    path distances are exactly the running sums.
    """
    s = _Session("chain")
    kinds = ["start"] + ["activity"] * (len(lengths) - 1) + ["end"] if len(lengths) > 1 else ["start", "end"]
    ids = []
    x = 0.0
    for i, kind in enumerate(kinds):
        eid = {"start": "s0", "end": "e0"}.get(kind, f"a{i}")
        ids.append(eid)
        s.tick(2 * SECOND)
        s.emit(eid, _CREATE_BY_KIND[kind], position=(x, 0.0))
        if i < len(lengths):
            x += lengths[i]
    for i in range(len(ids) - 1):
        s.tick(2 * SECOND)
        s.emit(f"ed{i + 1}", "CREATE_EDGE", edge_source=ids[i], edge_target=ids[i + 1])
    return s.build()


# ---------------------------------------------------------------------------
# pattern-by-construction logs (positive / negated variants per detector)


def _base_model(s: _Session, n_activities: int = 4, step_ms: int = 5 * SECOND) -> list[str]:
    """Start + activities + end, fully connected; returns node ids in order."""
    nodes = ["s0"] + [f"a{i}" for i in range(1, n_activities + 1)] + ["e0"]
    for i, eid in enumerate(nodes):
        kind = "start" if eid == "s0" else "end" if eid == "e0" else "activity"
        s.tick(step_ms)
        s.emit(eid, _CREATE_BY_KIND[kind], position=(float(100 * i), 0.0))
    for i in range(len(nodes) - 1):
        s.tick(step_ms)
        s.emit(f"ed{i + 1}", "CREATE_EDGE", edge_source=nodes[i], edge_target=nodes[i + 1])
    return nodes


def delete_burst_log(burst: bool) -> EventLog:
    """Five deletions 1s apart (burst) or a minute apart (scattered)."""
    s = _Session("delete-burst" if burst else "delete-scattered")
    extras = [f"x{i}" for i in range(5)]
    _base_model(s)
    for i, eid in enumerate(extras):
        s.tick(3 * SECOND)
        s.emit(eid, "CREATE_ACTIVITY", position=(50.0 * i, 100.0))
    for eid in extras:
        s.tick(1 * SECOND if burst else MINUTE)
        s.emit(eid, "DELETE_ACTIVITY")
    return s.build()


def move_timing_log(style: str) -> EventLog:
    """Move placement per style: 'few', 'early-bound', 'end-phase' or 'scattered'."""
    s = _Session(f"moves-{style}")
    hour = 60 * MINUTE
    nodes = ["s0"] + [f"a{i}" for i in range(1, 9)] + ["e0"]
    spread = hour // (len(nodes) + 1)
    for i, eid in enumerate(nodes):
        kind = "start" if eid == "s0" else "end" if eid == "e0" else "activity"
        s.emit(eid, _CREATE_BY_KIND[kind], at=s.t + i * spread, position=(float(100 * i), 0.0))
        if style == "early-bound" and kind == "activity":
            s.emit(eid, "MOVE_ACTIVITY", at=s.t + i * spread + SECOND, position=(float(100 * i), 10.0))
    t_first = s.t
    for i in range(len(nodes) - 1):
        s.emit(
            f"ed{i + 1}", "CREATE_EDGE",
            at=t_first + i * spread + spread // 2,
            edge_source=nodes[i], edge_target=nodes[i + 1],
        )
    t_end = t_first + hour
    if style == "end-phase":
        for i, eid in enumerate(nodes[1:-1]):
            s.emit(eid, "MOVE_ACTIVITY", at=t_end - (i + 1) * 20 * SECOND, position=(float(100 * i), 10.0))
    elif style == "scattered":
        for phase, eid in zip((0.12, 0.38, 0.61, 0.93), ("a1", "a2", "a3", "a4")):
            s.emit(eid, "MOVE_ACTIVITY", at=t_first + int(phase * hour), position=(0.0, 10.0))
    elif style == "few":
        pass  # not a single move
    s.emit("e0", "MOVE_END_EVENT", at=t_end, position=(1000.0, 0.0))
    return s.build()


def orientation_log(style: str) -> EventLog:
    """Creation order: 'aspect' (all nodes, then all edges) or 'flow' (alternating)."""
    s = _Session(f"creation-{style}")
    nodes = ["s0", "a1", "a2", "a3", "a4", "e0"]
    kinds = ["start", "activity", "activity", "activity", "activity", "end"]
    if style == "aspect":
        for i, (eid, kind) in enumerate(zip(nodes, kinds)):
            s.tick(4 * SECOND)
            s.emit(eid, _CREATE_BY_KIND[kind], position=(float(100 * i), 0.0))
        for i in range(len(nodes) - 1):
            s.tick(4 * SECOND)
            s.emit(f"ed{i + 1}", "CREATE_EDGE", edge_source=nodes[i], edge_target=nodes[i + 1])
    else:  # flow: node, node, edge, node, edge, node, edge ...
        for i, (eid, kind) in enumerate(zip(nodes, kinds)):
            s.tick(4 * SECOND)
            s.emit(eid, _CREATE_BY_KIND[kind], position=(float(100 * i), 0.0))
            if i > 0:
                s.tick(4 * SECOND)
                s.emit(f"ed{i}", "CREATE_EDGE", edge_source=nodes[i - 1], edge_target=nodes[i])
    return s.build()


def gateway_pairing_log(paired: bool) -> EventLog:
    """Gateways created back to back (paired) or always split by activities."""
    s = _Session("gateways-paired" if paired else "gateways-split")
    seq = (
        ["start", "xor", "xor", "activity", "activity", "and", "and", "activity", "end"]
        if paired
        else ["start", "xor", "activity", "xor", "activity", "and", "activity", "and", "end"]
    )
    counters = {"xor": 0, "and": 0, "activity": 0}
    ids = []
    for kind in seq:
        if kind == "start":
            eid = "s0"
        elif kind == "end":
            eid = "e0"
        else:
            counters[kind] += 1
            eid = f"{kind[0]}{counters[kind]}" if kind != "activity" else f"a{counters['activity']}"
        ids.append(eid)
        s.tick(4 * SECOND)
        s.emit(eid, _CREATE_BY_KIND[kind], position=(float(100 * len(ids)), 0.0))
    for i in range(len(ids) - 1):
        s.tick(4 * SECOND)
        s.emit(f"ed{i + 1}", "CREATE_EDGE", edge_source=ids[i], edge_target=ids[i + 1])
    return s.build()


def chunk_log(k: int, gap_ms: int = 5 * MINUTE) -> EventLog:
    """Creation activity in k groups separated by gap_ms pauses."""
    s = _Session(f"chunks-{k}")
    prev: str | None = None
    for chunk in range(k):
        if chunk > 0:
            s.tick(gap_ms)
        for j in range(3):
            eid = f"a{chunk}_{j}" if (chunk, j) != (0, 0) else "s0"
            kind = "start" if eid == "s0" else "activity"
            s.tick(3 * SECOND)
            s.emit(eid, _CREATE_BY_KIND[kind], position=(float(100 * j), float(80 * chunk)))
            if prev is not None:
                s.tick(2 * SECOND)
                s.emit(f"ed_{chunk}_{j}", "CREATE_EDGE", edge_source=prev, edge_target=eid)
            prev = eid
    return s.build()


def pause_log(paused: bool) -> EventLog:
    """A two-minute silence mid-session, or perfectly steady activity."""
    s = _Session("paused" if paused else "steady")
    nodes = _base_model(s, n_activities=3)
    if paused:
        s.tick(2 * MINUTE)
    for eid in nodes[1:-1]:
        s.tick(5 * SECOND)
        s.emit(eid, "NAME_ACTIVITY", label_text=eid)
    return s.build()


def chaos_log(chaotic: bool) -> EventLog:
    """Scattered moves, orientation-free creation and heavy churn, or the opposite."""
    if not chaotic:
        return move_timing_log("early-bound")
    s = _Session("chaos")
    hour = 60 * MINUTE
    # creation labels N N E N N N E E E N N N: the early edge spoils the
    # aspect precondition while the interleaving stays below the flow cutoff
    t = s.t
    s.emit("s0", "CREATE_START_EVENT", at=t, position=(0.0, 0.0))
    s.emit("a1", "CREATE_ACTIVITY", at=t + 1 * MINUTE, position=(100.0, 0.0))
    s.emit("ed1", "CREATE_EDGE", at=t + 2 * MINUTE, edge_source="s0", edge_target="a1")
    s.emit("a2", "CREATE_ACTIVITY", at=t + 3 * MINUTE, position=(200.0, 0.0))
    s.emit("a3", "CREATE_ACTIVITY", at=t + 4 * MINUTE, position=(300.0, 0.0))
    s.emit("e0", "CREATE_END_EVENT", at=t + 5 * MINUTE, position=(400.0, 0.0))
    s.emit("ed2", "CREATE_EDGE", at=t + 6 * MINUTE, edge_source="a1", edge_target="a2")
    s.emit("ed3", "CREATE_EDGE", at=t + 7 * MINUTE, edge_source="a2", edge_target="a3")
    s.emit("ed4", "CREATE_EDGE", at=t + 8 * MINUTE, edge_source="a3", edge_target="e0")
    # moves spread over all quartiles, far from creations and not end-heavy
    for phase, eid in zip((0.15, 0.35, 0.6, 0.9), ("a1", "a2", "a3", "a1")):
        s.emit(eid, "MOVE_ACTIVITY", at=t + int(phase * hour), position=(50.0, 50.0))
    # deletions push churn over the line
    for i, at_min in enumerate((20, 40, 55)):
        eid = f"x{i}"
        s.emit(eid, "CREATE_ACTIVITY", at=t + at_min * MINUTE - 30 * SECOND, position=(0.0, 100.0))
        s.emit(eid, "DELETE_ACTIVITY", at=t + at_min * MINUTE)
    s.emit("e0", "MOVE_END_EVENT", at=t + hour, position=(500.0, 0.0))
    return s.build()
