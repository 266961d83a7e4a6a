"""Shared graph helpers for tests: random model graphs and brute-force oracles."""

from __future__ import annotations

import random
from fractions import Fraction

from ppmchart.replay import ModelArc, ModelGraph, ModelNode
from ppmchart.taxonomy import ElementKind


def make_graph(
    node_ids: list[str],
    arcs: list[tuple[str, str, str]],  # (arc_id, source, target)
    *,
    start_ids: tuple[str, ...] = ("n0",),
    positions: dict[str, tuple[float, float]] | None = None,
) -> ModelGraph:
    graph = ModelGraph()
    for nid in node_ids:
        kind = ElementKind.START_EVENT if nid in start_ids else ElementKind.ACTIVITY
        graph.nodes[nid] = ModelNode(
            element_id=nid,
            kind=kind,
            created_at=0,
            last_position=positions.get(nid) if positions else None,
        )
    for aid, src, tgt in arcs:
        graph.arcs[aid] = ModelArc(element_id=aid, source=src, target=tgt, created_at=0)
    graph.element_order = tuple(node_ids) + tuple(a[0] for a in arcs)
    return graph


def random_weighted_graph(
    rng: random.Random,
    *,
    max_nodes: int = 8,
    max_arcs: int = 14,
    exact: bool = True,
) -> tuple[ModelGraph, dict[str, object]]:
    """A random directed graph (cycles allowed) with positive arc weights."""
    n = rng.randint(1, max_nodes)
    node_ids = [f"n{i}" for i in range(n)]
    arcs = []
    weights: dict[str, object] = {}
    for a in range(rng.randint(0, max_arcs)):
        src, tgt = rng.choice(node_ids), rng.choice(node_ids)
        aid = f"e{a}"
        arcs.append((aid, src, tgt))
        if exact:
            weights[aid] = Fraction(rng.randint(1, 40), rng.randint(1, 4))
        else:
            weights[aid] = rng.uniform(0.1, 25.0)
    return make_graph(node_ids, arcs), weights


def brute_force_distances(
    graph: ModelGraph, weights: dict[str, object], sources: list[str]
) -> dict[str, object]:
    """Minimum path weight from any source, by exhaustive simple-path search."""
    adjacency: dict[str, list[tuple[str, object]]] = {}
    for arc in graph.arcs.values():
        adjacency.setdefault(arc.source, []).append((arc.target, weights[arc.element_id]))

    best: dict[str, object] = {}

    def visit(node: str, dist, seen: frozenset[str]) -> None:
        if node not in best or dist < best[node]:
            best[node] = dist
        for nxt, w in adjacency.get(node, ()):
            if nxt not in seen:  # simple paths only; optimal paths never revisit
                visit(nxt, dist + w, seen | {nxt})

    for s in sources:
        visit(s, 0, frozenset({s}))
    return best
