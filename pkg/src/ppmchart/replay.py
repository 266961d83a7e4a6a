"""Replay a session log into the process-model graph and order its elements.

Replaying applies the recorded operations in global timestamp order: creations
add nodes and arcs, moves update node positions, deletions stamp a deletion
time, reconnects swap arc endpoints.  The replayed graph keeps deleted
elements with their last-known topology, because the chart shows every element
that existed at any point of the session.

Two orderings over the elements are derived from the final graph:

* distance from start: nodes rank at their shortest-path distance from the
  start set, where an arc's length is the straight-line distance between its
  endpoints (bend points ignored); an arc ranks at the mean of its endpoint
  ranks, which realizes the half-length-at-path-ends rule.
* create order from start: same node ranks, but an arc ranks at the maximum
  endpoint rank plus one, so every arc sorts after both nodes it connects
  (edges can only be drawn once both endpoints exist).

Logs without recorded coordinates fall back to unit arc lengths (hop counts);
the fallback is flagged on the result.  Graphs may contain cycles; distances
are computed with Dijkstra over non-negative lengths.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .logmodel import EventLog, LogEvent
from .taxonomy import (
    ElementKind,
    OperationCategory,
    OperationKind,
    UnknownOperation,
    category_of,
    element_kind_of,
    resolve,
)

__all__ = [
    "ElementOrder",
    "ModelArc",
    "ModelGraph",
    "ModelNode",
    "OrderingUnavailable",
    "ReplayError",
    "arc_length",
    "create_order_from_start",
    "distance_from_start",
    "replay",
    "shortest_path_distances",
]


class ReplayError(Exception):
    pass


class OrderingUnavailable(Exception):
    """The requested element order cannot be computed for this graph."""


@dataclass
class ModelNode:
    element_id: str
    kind: ElementKind
    last_position: tuple[float, float] | None = None
    created_at: int | None = None
    deleted_at: int | None = None

    @property
    def surviving(self) -> bool:
        return self.deleted_at is None


@dataclass
class ModelArc:
    element_id: str
    source: str | None = None
    target: str | None = None
    created_at: int | None = None
    deleted_at: int | None = None

    @property
    def surviving(self) -> bool:
        return self.deleted_at is None


@dataclass
class ModelGraph:
    """Final replayed state: every element ever present, deletions stamped."""

    nodes: dict[str, ModelNode] = field(default_factory=dict)
    arcs: dict[str, ModelArc] = field(default_factory=dict)
    element_order: tuple[str, ...] = ()  # trace order in the source log
    warnings: tuple[str, ...] = ()

    @property
    def surviving(self) -> set[str]:
        """Elements still present in the final model.

        An undeleted arc whose endpoint was deleted is not counted: it dangles
        (see ``dangling``) rather than survives.
        """
        alive = {n.element_id for n in self.nodes.values() if n.surviving}
        for arc in self.arcs.values():
            if arc.surviving and arc.source in alive and arc.target in alive:
                alive.add(arc.element_id)
        return alive

    def dangling(self) -> dict[str, str]:
        """Arc id -> reason, for arcs without resolvable live endpoints."""
        out: dict[str, str] = {}
        for arc in self.arcs.values():
            if arc.source is None or arc.target is None:
                out[arc.element_id] = "missing-endpoint-id"
                continue
            if not arc.surviving:
                continue
            for end in (arc.source, arc.target):
                node = self.nodes.get(end)
                if node is None or not node.surviving:
                    out[arc.element_id] = "dangling-at-end"
                    break
        return out

    def dump(self) -> str:
        """One node/arc per line, for eyeballing and oracle comparison."""
        lines = []
        for n in self.nodes.values():
            pos = "-" if n.last_position is None else f"{n.last_position[0]:g},{n.last_position[1]:g}"
            lines.append(
                f"node {n.element_id} kind={n.kind.value} pos={pos} "
                f"created={n.created_at} deleted={n.deleted_at}"
            )
        for a in self.arcs.values():
            lines.append(
                f"arc {a.element_id} {a.source or '?'} -> {a.target or '?'} "
                f"created={a.created_at} deleted={a.deleted_at}"
            )
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class ElementOrder:
    """A total ordering of all log element ids, with the rank behind each."""

    elements: tuple[str, ...]
    ranks: Mapping[str, float]
    unit_lengths: bool = False  # set when positions were missing and hop counts were used


_NODE_CREATES = {
    OperationKind.CREATE_START_EVENT,
    OperationKind.CREATE_END_EVENT,
    OperationKind.CREATE_ACTIVITY,
    OperationKind.CREATE_XOR,
    OperationKind.CREATE_AND,
}


def replay(log: EventLog) -> ModelGraph:
    """Reconstruct the final model graph from the log.

    Events touching elements with no prior creation are applied best-effort
    (the element is materialized) and recorded as warnings.  A second creation
    of an existing element id raises ReplayError.
    """
    graph = ModelGraph(element_order=tuple(t.element_id for t in log.traces))
    warnings: list[str] = []

    def ensure_node(ev: LogEvent, kind: ElementKind) -> ModelNode:
        node = graph.nodes.get(ev.element_id)
        if node is None:
            warnings.append(f"{ev.name} on {ev.element_id!r} before its creation")
            node = ModelNode(element_id=ev.element_id, kind=kind)
            graph.nodes[ev.element_id] = node
        return node

    def ensure_arc(ev: LogEvent) -> ModelArc:
        arc = graph.arcs.get(ev.element_id)
        if arc is None:
            warnings.append(f"{ev.name} on {ev.element_id!r} before its creation")
            arc = ModelArc(element_id=ev.element_id)
            graph.arcs[ev.element_id] = arc
        return arc

    for ev in log.events():
        kind = resolve(ev.name)
        if isinstance(kind, UnknownOperation):
            warnings.append(f"skipped unknown operation {ev.name!r} on {ev.element_id!r}")
            continue
        category = category_of(kind)
        element = element_kind_of(kind)

        if kind in _NODE_CREATES:
            existing = graph.nodes.get(ev.element_id)
            if existing is not None and existing.created_at is not None:
                raise ReplayError(f"duplicate creation of {ev.element_id!r}")
            if existing is None:
                existing = ModelNode(element_id=ev.element_id, kind=element)
                graph.nodes[ev.element_id] = existing
            existing.kind = element
            existing.created_at = ev.timestamp
            if ev.position is not None:
                existing.last_position = ev.position
        elif kind is OperationKind.CREATE_EDGE:
            existing_arc = graph.arcs.get(ev.element_id)
            if existing_arc is not None and existing_arc.created_at is not None:
                raise ReplayError(f"duplicate creation of {ev.element_id!r}")
            if existing_arc is None:
                existing_arc = ModelArc(element_id=ev.element_id)
                graph.arcs[ev.element_id] = existing_arc
            existing_arc.created_at = ev.timestamp
            if ev.edge_source is None or ev.edge_target is None:
                warnings.append(f"edge {ev.element_id!r} created without endpoints (dangling)")
            existing_arc.source = ev.edge_source
            existing_arc.target = ev.edge_target
        elif category is OperationCategory.MOVE and element is not ElementKind.EDGE:
            node = ensure_node(ev, element)
            if ev.position is not None:
                node.last_position = ev.position
        elif category is OperationCategory.DELETE:
            if element is ElementKind.EDGE:
                ensure_arc(ev).deleted_at = ev.timestamp
            else:
                ensure_node(ev, element).deleted_at = ev.timestamp
        elif kind is OperationKind.RECONNECT_EDGE:
            arc = ensure_arc(ev)
            if ev.edge_source is not None:
                arc.source = ev.edge_source
            if ev.edge_target is not None:
                arc.target = ev.edge_target
        # renames, bend-point edits and edge-label moves leave the topology alone

    graph.warnings = tuple(warnings)
    return graph


def arc_length(arc: ModelArc, graph: ModelGraph, *, unit_fallback: bool = False) -> float:
    """Straight-line distance between the arc's endpoints, in pixels.

    Bend-point routing is deliberately ignored.  With ``unit_fallback`` every
    arc has length 1.0 (hop-count mode).
    """
    if unit_fallback:
        return 1.0
    if arc.source is None or arc.target is None:
        raise OrderingUnavailable(f"arc {arc.element_id!r} has no endpoints")
    for end in (arc.source, arc.target):
        node = graph.nodes.get(end)
        if node is None or node.last_position is None:
            raise OrderingUnavailable(f"no recorded position for {end!r}")
    (x1, y1) = graph.nodes[arc.source].last_position  # type: ignore[misc]
    (x2, y2) = graph.nodes[arc.target].last_position  # type: ignore[misc]
    return math.hypot(x2 - x1, y2 - y1)


def shortest_path_distances(
    adjacency: Mapping[str, Iterable[tuple[str, object]]],
    sources: Iterable[str],
):
    """Dijkstra over non-negative additive weights of any comparable type.

    Works unchanged for ints, Fractions and floats, which keeps exact-arithmetic
    oracles honest.  Returns only reached nodes.
    """
    dist: dict[str, object] = {}
    heap: list[tuple[object, int, str]] = []
    counter = 0
    for s in sources:
        dist[s] = 0
        heap.append((0, counter, s))
        counter += 1
    heapq.heapify(heap)
    while heap:
        d, _, u = heapq.heappop(heap)
        if d > dist.get(u, d):  # stale entry
            continue
        for v, w in adjacency.get(u, ()):
            nd = d + w  # type: ignore[operator]
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                counter += 1
                heapq.heappush(heap, (nd, counter, v))
    return dist


def _start_set(graph: ModelGraph) -> list[str]:
    starts = [
        n.element_id
        for n in graph.nodes.values()
        if n.kind is ElementKind.START_EVENT and n.surviving
    ]
    if starts:
        return starts
    # degenerate log: fall back to surviving nodes nothing (surviving) points at
    targets = {a.target for a in graph.arcs.values() if a.surviving and a.target is not None}
    return [n.element_id for n in graph.nodes.values() if n.surviving and n.element_id not in targets]


def _node_ranks(
    graph: ModelGraph, length_fn: Callable[[ModelArc], object]
) -> dict[str, object]:
    starts = _start_set(graph)
    if not starts:
        raise OrderingUnavailable("no start node resolvable")
    adjacency: dict[str, list[tuple[str, object]]] = {}
    for arc in graph.arcs.values():
        if arc.source is None or arc.target is None:
            continue
        adjacency.setdefault(arc.source, []).append((arc.target, length_fn(arc)))
    return shortest_path_distances(adjacency, starts)


def _resolve_length_fn(
    graph: ModelGraph, length_fn: Callable[[ModelArc], object] | None
) -> tuple[Callable[[ModelArc], object], bool]:
    if length_fn is not None:
        return length_fn, False
    endpoints = {
        end
        for a in graph.arcs.values()
        if a.source is not None and a.target is not None
        for end in (a.source, a.target)
    }
    complete = all(
        end in graph.nodes and graph.nodes[end].last_position is not None for end in endpoints
    )
    if complete:
        return (lambda arc: arc_length(arc, graph)), False
    return (lambda arc: 1), True  # global unit-length fallback, exact ints


def _order(
    graph: ModelGraph,
    arc_rank: Callable[[object, object], object],
    length_fn: Callable[[ModelArc], object] | None,
    arcs_after_ties: bool,
) -> ElementOrder:
    fn, unit = _resolve_length_fn(graph, length_fn)
    node_dist = _node_ranks(graph, fn)

    ranks: dict[str, float] = {}
    for eid in graph.element_order:
        if eid in graph.nodes:
            ranks[eid] = node_dist.get(eid, math.inf)
        elif eid in graph.arcs:
            arc = graph.arcs[eid]
            if arc.source is None or arc.target is None:
                ranks[eid] = math.inf
                continue
            rs = node_dist.get(arc.source, math.inf)
            rt = node_dist.get(arc.target, math.inf)
            ranks[eid] = math.inf if math.inf in (rs, rt) else arc_rank(rs, rt)
        else:
            ranks[eid] = math.inf  # trace never materialized an element

    positions = {eid: i for i, eid in enumerate(graph.element_order)}
    if arcs_after_ties:
        # keep arcs behind equally-ranked nodes so the after-both-endpoints
        # guarantee also holds in the unranked (infinite) tail
        key = lambda eid: (ranks[eid], eid in graph.arcs, positions[eid])
    else:
        key = lambda eid: (ranks[eid], positions[eid])
    ordered = tuple(sorted(graph.element_order, key=key))
    return ElementOrder(elements=ordered, ranks=ranks, unit_lengths=unit)


def distance_from_start(
    graph: ModelGraph, *, length_fn: Callable[[ModelArc], object] | None = None
) -> ElementOrder:
    """Order elements by shortest graphical path from the start set.

    Node rank is the shortest-path distance; an arc ranks at the mean of its
    endpoint ranks.  Elements unreachable from a start (including deleted or
    dangling ones) rank +inf and keep their log order at the end.  Ties keep
    the order of the related log records.
    """
    return _order(graph, lambda a, b: (a + b) / 2, length_fn, arcs_after_ties=False)


def create_order_from_start(
    graph: ModelGraph, *, length_fn: Callable[[ModelArc], object] | None = None
) -> ElementOrder:
    """Distance-from-start variant placing every arc after both its endpoints.

    Arc rank is the maximum endpoint rank plus one.
    """
    return _order(graph, lambda a, b: max(a, b) + 1, length_fn, arcs_after_ties=True)
