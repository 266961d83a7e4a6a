"""Quantify the modeling-behavior patterns a chart makes visible.

The chart reveals recurring session shapes: pauses (horizontal gaps with no
dots anywhere), bulk deletions (vertical red lines), layout habits (moves
right after creation, a move phase at the end, or moves scattered all over),
creation orderings (all nodes before any edge versus node-and-edge region by
region), split/join gateways created back to back, creation bursts separated
by pauses (chunked modeling), and sessions with no discernible structure.

The visual patterns have no inherent numeric boundaries, so every detector
threshold lives in DetectorConfig with documented defaults; all detectors are
pure functions of (log, thresholds).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from typing import Sequence

from .logmodel import EventLog, LogEvent
from .taxonomy import (
    OperationCategory,
    OperationKind,
    UnknownOperation,
    category_of,
    element_kind_of,
    resolve,
)

__all__ = [
    "DetectorConfig",
    "SessionProfile",
    "basic_metrics",
    "chaos_flag",
    "classify_move_timing",
    "compute_profile",
    "creation_orientation",
    "detect_chunks",
    "detect_delete_bursts",
    "detect_pauses",
    "gateway_pairing_score",
    "profile_csv_header",
    "profile_csv_row",
    "profile_to_dict",
]


@dataclass(frozen=True)
class DetectorConfig:
    """All detector thresholds; the defaults are documented choices, not data."""

    pause_min_gap_ms: int = 60_000
    burst_window_ms: int = 10_000
    burst_min_size: int = 3
    few_moves_vs_creates: float = 0.10       # Few: moves < this fraction of creates
    early_lag_fraction: float = 0.10         # EarlyBound: lag <= this fraction of duration ...
    early_move_share: float = 0.70           # ... for at least this share of moves
    end_phase_start: float = 0.80            # EndPhase: phase >= this ...
    end_move_share: float = 0.50             # ... for at least this share of moves
    scattered_min_quartiles: int = 3
    aspect_max_interleaving: float = 0.20
    aspect_nodes_before_edges: float = 0.80  # share of node creations before the first edge
    flow_min_interleaving: float = 0.40
    chunk_pause_ms: int = 60_000
    chaos_min_churn: float = 0.40            # move_ratio + delete_ratio


@dataclass(frozen=True)
class Chunk:
    start: int
    end: int
    element_counts: tuple[tuple[str, int], ...]  # element kind -> creations in the chunk

    @property
    def size(self) -> int:
        return sum(n for _, n in self.element_counts)


@dataclass(frozen=True)
class SessionProfile:
    log_id: str
    duration_ms: int
    element_count: int
    total_operations: int
    category_counts: tuple[tuple[str, int], ...]
    move_ratio: float
    delete_ratio: float
    rename_ratio: float
    pause_intervals: tuple[tuple[int, int], ...]
    delete_bursts: tuple[tuple[int, int], ...]  # (start timestamp, size)
    move_timing_class: str  # few | early-bound | end-phase | scattered | mixed
    orientation: str  # aspect-oriented | flow-oriented | indeterminate
    interleaving_score: float
    gateway_pairing: float | None  # None when fewer than two gateway creations
    chunks: tuple[Chunk, ...]
    chaotic: bool

    def count(self, category: OperationCategory) -> int:
        return dict(self.category_counts).get(category.value, 0)


def _classified(log: EventLog) -> list[tuple[LogEvent, OperationKind]]:
    """Events in global order with resolved kinds; unknown names are skipped."""
    out = []
    for ev in log.events():
        kind = resolve(ev.name)
        if not isinstance(kind, UnknownOperation):
            out.append((ev, kind))
    return out


def basic_metrics(log: EventLog) -> tuple[int, int, dict[OperationCategory, int], dict[str, float]]:
    """(duration_ms, element_count, counts per category, {move,delete,rename} ratios)."""
    events = _classified(log)
    counts = {c: 0 for c in OperationCategory}
    for _, kind in events:
        counts[category_of(kind)] += 1
    total = sum(counts.values())
    if events:
        stamps = [ev.timestamp for ev, _ in events]
        duration = max(stamps) - min(stamps)
    else:
        duration = 0
    ratios = {
        "move": counts[OperationCategory.MOVE] / total if total else 0.0,
        "delete": counts[OperationCategory.DELETE] / total if total else 0.0,
        "rename": counts[OperationCategory.RENAME] / total if total else 0.0,
    }
    return duration, len(log.traces), counts, ratios


def _gaps(stamps: Sequence[int], min_gap_ms: int) -> list[tuple[int, int]]:
    return [
        (a, b) for a, b in zip(stamps, stamps[1:]) if b - a >= min_gap_ms
    ]


def detect_pauses(log: EventLog, min_gap_ms: int = 60_000) -> list[tuple[int, int]]:
    """Maximal gaps >= min_gap_ms in the global event sequence (all traces pooled)."""
    stamps = sorted(ev.timestamp for ev, _ in _classified(log))
    if len(stamps) < 2:
        return []
    return _gaps(stamps, min_gap_ms)


def detect_delete_bursts(
    log: EventLog, window_ms: int = 10_000, min_size: int = 3
) -> list[tuple[int, int]]:
    """Maximal runs of deletions at most window_ms apart, of at least min_size.

    Returns (start timestamp, run size) per burst.
    """
    deletes = sorted(
        ev.timestamp
        for ev, kind in _classified(log)
        if category_of(kind) is OperationCategory.DELETE
    )
    bursts = []
    run_start = 0
    for i in range(1, len(deletes) + 1):
        if i == len(deletes) or deletes[i] - deletes[i - 1] > window_ms:
            size = i - run_start
            if size >= min_size:
                bursts.append((deletes[run_start], size))
            run_start = i
    return bursts


def classify_move_timing(
    log: EventLog, config: DetectorConfig = DetectorConfig()
) -> tuple[str, dict[str, object]]:
    """Class of move timing: few, early-bound, end-phase, scattered, or mixed.

    Per move, lag is the time since the element's creation and phase is the
    position within the whole session; the class thresholds come from the
    config.  Returns (class, evidence dict).
    """
    events = _classified(log)
    creates = {
        ev.element_id: ev.timestamp
        for ev, kind in reversed(events)
        if category_of(kind) is OperationCategory.CREATE
    }
    create_count = sum(1 for _, k in events if category_of(k) is OperationCategory.CREATE)
    moves = [(ev, k) for ev, k in events if category_of(k) is OperationCategory.MOVE]
    evidence: dict[str, object] = {"moves": len(moves), "creates": create_count}
    if not moves or (create_count and len(moves) < config.few_moves_vs_creates * create_count):
        return "few", evidence

    stamps = [ev.timestamp for ev, _ in events]
    t_first, duration = min(stamps), max(stamps) - min(stamps)
    lags = []
    phases = []
    for ev, _ in moves:
        phases.append((ev.timestamp - t_first) / duration if duration else 0.0)
        if ev.element_id in creates:
            lags.append(ev.timestamp - creates[ev.element_id])
    early = [lag for lag in lags if lag <= config.early_lag_fraction * duration]
    late = [p for p in phases if p >= config.end_phase_start]
    quartiles = {min(3, int(p * 4)) for p in phases}
    evidence.update(
        early_share=len(early) / len(lags) if lags else 0.0,
        end_share=len(late) / len(phases),
        quartiles=sorted(quartiles),
    )
    if lags and len(early) >= config.early_move_share * len(lags):
        return "early-bound", evidence
    if len(late) >= config.end_move_share * len(phases):
        return "end-phase", evidence
    if len(quartiles) >= config.scattered_min_quartiles:
        return "scattered", evidence
    return "mixed", evidence


_NODE_CREATES = {
    OperationKind.CREATE_START_EVENT,
    OperationKind.CREATE_END_EVENT,
    OperationKind.CREATE_ACTIVITY,
    OperationKind.CREATE_XOR,
    OperationKind.CREATE_AND,
}


def creation_orientation(
    log: EventLog, config: DetectorConfig = DetectorConfig()
) -> tuple[str, float]:
    """Aspect-oriented (nodes first, then edges) vs flow-oriented creation.

    Over the creation sequence labeled node/edge, the interleaving score is
    the fraction of adjacent pairs that switch label.  Low score plus most
    nodes created before the first edge reads as aspect-oriented; high score
    as flow-oriented.
    """
    labels = []
    for ev, kind in _classified(log):
        if kind in _NODE_CREATES:
            labels.append("N")
        elif kind is OperationKind.CREATE_EDGE:
            labels.append("E")
    if "N" not in labels or "E" not in labels:
        return "indeterminate", 0.0
    switches = sum(1 for a, b in zip(labels, labels[1:]) if a != b)
    score = switches / (len(labels) - 1)
    first_edge = labels.index("E")
    nodes_before = labels[:first_edge].count("N")
    node_total = labels.count("N")
    if (
        score <= config.aspect_max_interleaving
        and nodes_before >= config.aspect_nodes_before_edges * node_total
    ):
        return "aspect-oriented", score
    if score >= config.flow_min_interleaving:
        return "flow-oriented", score
    return "indeterminate", score


def gateway_pairing_score(log: EventLog) -> float | None:
    """How often a gateway creation is immediately followed by another one.

    Counted over the creation sequence; gateway creations with no successor
    are excluded.  None when fewer than two gateways were created.
    """
    creation_ops = [
        kind for _, kind in _classified(log) if category_of(kind) is OperationCategory.CREATE
    ]
    gateway = {OperationKind.CREATE_XOR, OperationKind.CREATE_AND}
    gateway_positions = [i for i, k in enumerate(creation_ops) if k in gateway]
    if len(gateway_positions) < 2:
        return None
    with_successor = [i for i in gateway_positions if i + 1 < len(creation_ops)]
    if not with_successor:
        return None
    paired = sum(1 for i in with_successor if creation_ops[i + 1] in gateway)
    return paired / len(with_successor)


def detect_chunks(log: EventLog, pause_threshold_ms: int = 60_000) -> list[Chunk]:
    """Partition the creation events at pauses of at least the threshold."""
    creates = sorted(
        ((ev.timestamp, ev, kind) for ev, kind in _classified(log)
         if category_of(kind) is OperationCategory.CREATE),
        key=lambda item: item[0],
    )
    if not creates:
        return []
    chunks: list[Chunk] = []
    current: list[tuple[int, OperationKind]] = []
    prev_ts: int | None = None
    for ts, _, kind in creates:
        if prev_ts is not None and ts - prev_ts >= pause_threshold_ms:
            chunks.append(_finish_chunk(current))
            current = []
        current.append((ts, kind))
        prev_ts = ts
    chunks.append(_finish_chunk(current))
    return chunks


def _finish_chunk(items: list[tuple[int, OperationKind]]) -> Chunk:
    counts: dict[str, int] = {}
    for _, kind in items:
        key = element_kind_of(kind).value
        counts[key] = counts.get(key, 0) + 1
    return Chunk(
        start=items[0][0],
        end=items[-1][0],
        element_counts=tuple(sorted(counts.items())),
    )


def chaos_flag(
    move_timing_class: str,
    orientation: str,
    move_ratio: float,
    delete_ratio: float,
    config: DetectorConfig = DetectorConfig(),
) -> bool:
    """Chaotic session: scattered moves, no creation orientation, heavy churn."""
    return (
        move_timing_class == "scattered"
        and orientation == "indeterminate"
        and move_ratio + delete_ratio >= config.chaos_min_churn
    )


def compute_profile(log: EventLog, config: DetectorConfig = DetectorConfig()) -> SessionProfile:
    """Run every detector and assemble the session profile."""
    duration, element_count, counts, ratios = basic_metrics(log)
    move_class, _ = classify_move_timing(log, config)
    orientation, interleaving = creation_orientation(log, config)
    profile = SessionProfile(
        log_id=log.log_id,
        duration_ms=duration,
        element_count=element_count,
        total_operations=sum(counts.values()),
        category_counts=tuple((c.value, counts[c]) for c in OperationCategory),
        move_ratio=ratios["move"],
        delete_ratio=ratios["delete"],
        rename_ratio=ratios["rename"],
        pause_intervals=tuple(detect_pauses(log, config.pause_min_gap_ms)),
        delete_bursts=tuple(
            detect_delete_bursts(log, config.burst_window_ms, config.burst_min_size)
        ),
        move_timing_class=move_class,
        orientation=orientation,
        interleaving_score=interleaving,
        gateway_pairing=gateway_pairing_score(log),
        chunks=tuple(detect_chunks(log, config.chunk_pause_ms)),
        chaotic=False,
    )
    return replace(
        profile,
        chaotic=chaos_flag(move_class, orientation, profile.move_ratio, profile.delete_ratio, config),
    )


# ---------------------------------------------------------------------------
# serialization


def profile_to_dict(profile: SessionProfile) -> dict[str, object]:
    return {
        "log-id": profile.log_id,
        "duration-ms": profile.duration_ms,
        "element-count": profile.element_count,
        "total-operations": profile.total_operations,
        "category-counts": dict(profile.category_counts),
        "move-ratio": profile.move_ratio,
        "delete-ratio": profile.delete_ratio,
        "rename-ratio": profile.rename_ratio,
        "pause-intervals": [list(p) for p in profile.pause_intervals],
        "delete-bursts": [{"t": t, "size": n} for t, n in profile.delete_bursts],
        "move-timing-class": profile.move_timing_class,
        "orientation": profile.orientation,
        "interleaving-score": profile.interleaving_score,
        "gateway-pairing": profile.gateway_pairing,
        "chunks": [
            {"start": c.start, "end": c.end, "element-counts": dict(c.element_counts)}
            for c in profile.chunks
        ],
        "chaotic": profile.chaotic,
    }


_CSV_FIELDS = [
    "log_id",
    "duration_ms",
    "element_count",
    "total_operations",
    "create_ops",
    "move_ops",
    "delete_ops",
    "rename_ops",
    "reconnect_ops",
    "bendpoint_ops",
    "move_ratio",
    "delete_ratio",
    "rename_ratio",
    "pause_count",
    "delete_burst_count",
    "move_timing_class",
    "orientation",
    "interleaving_score",
    "gateway_pairing",
    "chunk_count",
    "chaotic",
]


def profile_csv_header() -> str:
    return ",".join(_CSV_FIELDS)


def profile_csv_row(profile: SessionProfile) -> str:
    counts = dict(profile.category_counts)
    values = [
        profile.log_id,
        profile.duration_ms,
        profile.element_count,
        profile.total_operations,
        counts.get("create", 0),
        counts.get("move", 0),
        counts.get("delete", 0),
        counts.get("rename", 0),
        counts.get("reconnect", 0),
        counts.get("bendpoint", 0),
        f"{profile.move_ratio:.6f}",
        f"{profile.delete_ratio:.6f}",
        f"{profile.rename_ratio:.6f}",
        len(profile.pause_intervals),
        len(profile.delete_bursts),
        profile.move_timing_class,
        profile.orientation,
        f"{profile.interleaving_score:.6f}",
        "" if profile.gateway_pairing is None else f"{profile.gateway_pairing:.6f}",
        len(profile.chunks),
        int(profile.chaotic),
    ]
    out = io.StringIO()
    csv.writer(out, lineterminator="").writerow(values)
    return out.getvalue()
