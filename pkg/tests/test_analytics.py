"""Detector semantics: worked examples, brute-force scans, monotonicity."""

from __future__ import annotations

import json
import random

import pytest

from ppmchart.analytics import (
    DetectorConfig,
    basic_metrics,
    chaos_flag,
    classify_move_timing,
    compute_profile,
    creation_orientation,
    detect_chunks,
    detect_delete_bursts,
    detect_pauses,
    gateway_pairing_score,
    profile_csv_header,
    profile_csv_row,
    profile_to_dict,
)
from ppmchart.fixtures import session_log
from ppmchart.logmodel import ElementTrace, EventLog, LogEvent
from ppmchart.taxonomy import OperationCategory

SECOND = 1_000
MINUTE = 60_000


def _log(*events: tuple[str, str, int]) -> EventLog:
    by_el: dict[str, list[LogEvent]] = {}
    for eid, name, t in events:
        by_el.setdefault(eid, []).append(LogEvent(name=name, timestamp=t, element_id=eid))
    return EventLog(
        traces=tuple(
            ElementTrace(eid, tuple(sorted(evs, key=lambda e: e.timestamp)))
            for eid, evs in by_el.items()
        )
    )


def _creation_log(sequence: str, spacing_ms: int = 1_000) -> EventLog:
    """Build a log whose creation sequence spells out N (node) / E (edge) / G (gateway)."""
    events: list[tuple[str, str, int]] = []
    t = 0
    counter = 0
    for ch in sequence:
        counter += 1
        t += spacing_ms
        if ch == "N":
            events.append((f"n{counter}", "CREATE_ACTIVITY", t))
        elif ch == "E":
            events.append((f"e{counter}", "CREATE_EDGE", t))
        elif ch == "G":
            events.append((f"g{counter}", "CREATE_XOR", t))
        elif ch == "A":
            events.append((f"a{counter}", "CREATE_ACTIVITY", t))
    return _log(*events)


# ---------------------------------------------------------------------------
# basic metrics


def test_basic_metrics_duration_and_count():
    log = _log(("a", "CREATE_ACTIVITY", 0), ("a", "MOVE_ACTIVITY", 4_000),
               ("a", "NAME_ACTIVITY", 10_000))
    duration, element_count, counts, _ = basic_metrics(log)
    assert duration == 10_000
    assert element_count == 1
    assert counts[OperationCategory.CREATE] == 1


def test_basic_metrics_ratios():
    log = _log(
        ("a", "CREATE_ACTIVITY", 0), ("b", "CREATE_ACTIVITY", 1),
        ("a", "MOVE_ACTIVITY", 2), ("b", "DELETE_ACTIVITY", 3),
    )
    _, _, counts, ratios = basic_metrics(log)
    assert ratios["move"] == 0.25
    assert ratios["delete"] == 0.25
    assert sum(counts.values()) == 4


def test_basic_metrics_empty_log():
    duration, element_count, counts, ratios = basic_metrics(EventLog())
    assert duration == 0 and element_count == 0
    assert sum(counts.values()) == 0
    assert ratios == {"move": 0.0, "delete": 0.0, "rename": 0.0}


# ---------------------------------------------------------------------------
# pauses


def test_pause_example():
    log = _log(("a", "CREATE_ACTIVITY", 0), ("a", "MOVE_ACTIVITY", 5_000),
               ("b", "CREATE_ACTIVITY", 125_000))
    assert detect_pauses(log, 60_000) == [(5_000, 125_000)]


def test_uniform_spacing_has_no_pauses():
    log = _log(*((f"x{i}", "CREATE_ACTIVITY", i * 1_000) for i in range(20)))
    assert detect_pauses(log, 60_000) == []


def test_single_event_has_no_pauses():
    assert detect_pauses(_log(("a", "CREATE_ACTIVITY", 0)), 60_000) == []


def test_pauses_match_brute_force_scan():
    rng = random.Random(31)
    for _ in range(100):
        stamps = sorted(rng.randint(0, 500_000) for _ in range(rng.randint(0, 40)))
        log = _log(*((f"x{i}", "CREATE_ACTIVITY", t) for i, t in enumerate(stamps)))
        gap = rng.choice([10_000, 60_000, 120_000])
        expected = [
            (a, b) for a, b in zip(stamps, stamps[1:]) if b - a >= gap
        ]
        assert detect_pauses(log, gap) == expected


def test_pause_threshold_monotonicity():
    rng = random.Random(8)
    stamps = sorted(rng.randint(0, 400_000) for _ in range(60))
    log = _log(*((f"x{i}", "CREATE_ACTIVITY", t) for i, t in enumerate(stamps)))
    counts = [len(detect_pauses(log, g)) for g in (1_000, 10_000, 60_000, 200_000)]
    assert counts == sorted(counts, reverse=True)


# ---------------------------------------------------------------------------
# delete bursts


def test_burst_of_five_close_deletes():
    log = _log(*((f"x{i}", "DELETE_ACTIVITY", i * 1_000) for i in range(5)))
    assert detect_delete_bursts(log, 10_000, 3) == [(0, 5)]


def test_spread_deletes_make_no_burst():
    log = _log(*((f"x{i}", "DELETE_ACTIVITY", i * 3_600_000) for i in range(5)))
    assert detect_delete_bursts(log, 10_000, 3) == []


def test_bursts_match_brute_force_window_scan():
    rng = random.Random(77)
    for _ in range(100):
        stamps = sorted(rng.randint(0, 200_000) for _ in range(rng.randint(0, 25)))
        log = _log(*((f"x{i}", "DELETE_ACTIVITY", t) for i, t in enumerate(stamps)))
        window, min_size = 10_000, 3
        expected = []
        run = [stamps[0]] if stamps else []
        for prev, cur in zip(stamps, stamps[1:]):
            if cur - prev <= window:
                run.append(cur)
            else:
                if len(run) >= min_size:
                    expected.append((run[0], len(run)))
                run = [cur]
        if len(run) >= min_size:
            expected.append((run[0], len(run)))
        assert detect_delete_bursts(log, window, min_size) == expected


def test_burst_min_size_monotonicity():
    log = _log(*((f"x{i}", "DELETE_ACTIVITY", i * 1_000) for i in range(9)))
    counts = [len(detect_delete_bursts(log, 10_000, s)) for s in (2, 3, 9, 10)]
    assert counts == sorted(counts, reverse=True)


# ---------------------------------------------------------------------------
# move timing


def _hour_session(moves: list[tuple[str, int]], creates: list[tuple[str, int]]) -> EventLog:
    events = [(eid, "CREATE_ACTIVITY", t) for eid, t in creates]
    events += [(eid, "MOVE_ACTIVITY", t) for eid, t in moves]
    events.append(("anchor", "CREATE_ACTIVITY", 3_600_000))
    return _log(*events)


def test_moves_right_after_creation_are_early_bound():
    creates = [(f"a{i}", i * 300_000) for i in range(10)]
    moves = [(f"a{i}", i * 300_000 + 1_000) for i in range(10)]
    cls, _ = classify_move_timing(_hour_session(moves, creates))
    assert cls == "early-bound"


def test_moves_in_final_minutes_are_end_phase():
    creates = [(f"a{i}", i * 1_000) for i in range(10)]
    moves = [(f"a{i}", 3_600_000 - i * 10_000) for i in range(5)]
    cls, _ = classify_move_timing(_hour_session(moves, creates))
    assert cls == "end-phase"


def test_moves_across_quartiles_are_scattered():
    creates = [(f"a{i}", i * 1_000) for i in range(10)]
    moves = [("a1", 360_000), ("a2", 1_440_000), ("a3", 2_160_000), ("a4", 3_240_000)]
    cls, evidence = classify_move_timing(_hour_session(moves, creates))
    assert cls == "scattered"
    assert evidence["quartiles"] == [0, 1, 2, 3]


def test_no_moves_is_few():
    creates = [(f"a{i}", i * 1_000) for i in range(10)]
    cls, _ = classify_move_timing(_hour_session([], creates))
    assert cls == "few"


def test_sparse_moves_are_few():
    creates = [(f"a{i}", i * 1_000) for i in range(30)]
    moves = [("a1", 500_000), ("a2", 3_000_000)]
    cls, _ = classify_move_timing(_hour_session(moves, creates))
    assert cls == "few"


# ---------------------------------------------------------------------------
# creation orientation


def test_orientation_block_sequence_is_aspect():
    orientation, score = creation_orientation(_creation_log("NNNNNEEEEE"))
    assert orientation == "aspect-oriented"
    assert score == pytest.approx(1 / 9)


def test_orientation_alternating_is_flow():
    orientation, score = creation_orientation(_creation_log("NENENENENE"))
    assert orientation == "flow-oriented"
    assert score == 1.0


def test_orientation_blockwise_mix_is_flow():
    orientation, score = creation_orientation(_creation_log("NNEENNEE"))
    assert orientation == "flow-oriented"
    assert score == pytest.approx(3 / 7)


def test_orientation_needs_both_labels():
    orientation, score = creation_orientation(_creation_log("NNNN"))
    assert (orientation, score) == ("indeterminate", 0.0)
    orientation, score = creation_orientation(_creation_log("EEEE"))
    assert (orientation, score) == ("indeterminate", 0.0)


def test_orientation_score_bounds():
    rng = random.Random(3)
    for _ in range(80):
        seq = "".join(rng.choice("NE") for _ in range(rng.randint(2, 30)))
        _, score = creation_orientation(_creation_log(seq))
        assert 0.0 <= score <= 1.0


# ---------------------------------------------------------------------------
# gateway pairing


def test_pairing_worked_example():
    # G G A G G: gateways with successors at positions 0,1,3 -> G,A,G -> 2/3
    assert gateway_pairing_score(_creation_log("GGAGG")) == pytest.approx(2 / 3)


def test_pairing_alternating_is_zero():
    assert gateway_pairing_score(_creation_log("GAGAG")) == 0.0


def test_pairing_single_gateway_is_absent():
    assert gateway_pairing_score(_creation_log("GAAA")) is None


def test_pairing_adjacent_pairs():
    # trailing gateway has no successor and is excluded: G,A,G followed -> 2/3
    score = gateway_pairing_score(_creation_log("GGAAGG"))
    assert score == pytest.approx(2 / 3)


# ---------------------------------------------------------------------------
# chunks


def test_two_chunks_split_by_pause():
    events = [(f"a{i}", "CREATE_ACTIVITY", i * 1_000) for i in range(11)]
    events += [(f"b{i}", "CREATE_ACTIVITY", 300_000 + i * 1_000) for i in range(11)]
    chunks = detect_chunks(_log(*events), 60_000)
    assert len(chunks) == 2
    assert chunks[0].start == 0 and chunks[0].end == 10_000
    assert chunks[1].start == 300_000
    assert dict(chunks[0].element_counts) == {"activity": 11}


def test_no_pauses_is_one_chunk():
    events = [(f"a{i}", "CREATE_ACTIVITY", i * 1_000) for i in range(10)]
    chunks = detect_chunks(_log(*events), 60_000)
    assert len(chunks) == 1
    assert chunks[0].size == 10


def test_chunk_boundaries_coincide_with_pauses_on_creates():
    rng = random.Random(13)
    for _ in range(60):
        stamps = sorted(rng.randint(0, 900_000) for _ in range(rng.randint(1, 30)))
        create_events = [(f"a{i}", "CREATE_ACTIVITY", t) for i, t in enumerate(stamps)]
        noise = [(f"m{i}", "MOVE_ACTIVITY", rng.randint(0, 900_000)) for i in range(5)]
        log = _log(*(create_events + noise))
        threshold = 60_000
        chunks = detect_chunks(log, threshold)
        creates_only = _log(*create_events)
        pauses = detect_pauses(creates_only, threshold)
        assert len(chunks) == len(pauses) + 1
        boundaries = [(a.end, b.start) for a, b in zip(chunks, chunks[1:])]
        assert boundaries == pauses


def test_huge_threshold_yields_single_chunk():
    events = [(f"a{i}", "CREATE_ACTIVITY", i * 10**7) for i in range(5)]
    assert len(detect_chunks(_log(*events), 10**18)) == 1


def test_no_creates_no_chunks():
    assert detect_chunks(_log(("a", "MOVE_ACTIVITY", 5)), 60_000) == []


# ---------------------------------------------------------------------------
# chaos flag


def test_chaos_rule_applications():
    assert chaos_flag("scattered", "indeterminate", 0.3, 0.2) is True
    assert chaos_flag("early-bound", "aspect-oriented", 0.1, 0.05) is False
    assert chaos_flag("scattered", "indeterminate", 0.25, 0.15) is True  # sum exactly 0.4
    assert chaos_flag("scattered", "flow-oriented", 0.3, 0.2) is False
    assert chaos_flag("mixed", "indeterminate", 0.3, 0.2) is False


# ---------------------------------------------------------------------------
# profile assembly and serialization


def test_profile_counts_sum_to_total():
    log, truth = session_log("sum", 9, 140, seed=2)
    profile = compute_profile(log)
    assert profile.total_operations == truth.total_operations
    assert sum(n for _, n in profile.category_counts) == profile.total_operations
    assert profile.category_counts == tuple(
        (c.value, truth.category_counts[c.value]) for c in OperationCategory
    )
    assert profile.element_count == truth.element_count
    assert profile.duration_ms == truth.duration_ms


def test_profile_json_and_csv_row():
    log, _ = session_log("serialize", 5, 60, seed=1)
    profile = compute_profile(log)
    blob = json.dumps(profile_to_dict(profile))
    parsed = json.loads(blob)
    assert parsed["log-id"] == "serialize"
    assert parsed["total-operations"] == 60
    header = profile_csv_header()
    row = profile_csv_row(profile)
    assert len(header.split(",")) == len(row.split(","))
    assert row.startswith("serialize,")


def test_detectors_are_deterministic():
    log, _ = session_log("det", 7, 100, seed=4)
    config = DetectorConfig()
    assert compute_profile(log, config) == compute_profile(log, config)
