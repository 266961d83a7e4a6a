"""Event-log data model and the two on-disk formats.

A session log holds the recorded canvas operations of one modeling session,
grouped in one trace per model element.  Every event carries the operation
name, the timestamp (normalized to epoch milliseconds), and the identifier of
the element it touched; node events may carry canvas coordinates, edge events
the connected source/target element ids, and (re)name events the label text.

Two concrete formats are supported:

* an XML subset of XES: ``<log><trace><event>`` with typed attributes keyed
  ``concept:name``, ``time:timestamp``, ``id``, ``x``, ``y``, ``source``,
  ``target``, ``label``;
* a flat CSV with columns ``element_id, name, timestamp_ms, x, y, source,
  target, label``.  Lines starting with ``#`` are comments; the writer uses
  ``# log:`` and ``# meta`` comment lines to round-trip the log id and
  metadata.

Parsing is total over these grammars: any byte stream yields either an
EventLog or a ParseError/SchemaError, never a crash.  Parsed values are
immutable and safe to share between threads.
"""

from __future__ import annotations

import csv
import io
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Iterator

from .taxonomy import OperationCategory, OperationKind, category_of, resolve, UnknownOperation

__all__ = [
    "ElementTrace",
    "EventLog",
    "LogError",
    "LogEvent",
    "ParseError",
    "SchemaError",
    "ValidationFinding",
    "parse_log",
    "validate_log",
    "write_log",
]

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
_MS = timedelta(milliseconds=1)

FORMATS = ("xes", "csv")


class LogError(Exception):
    pass


class ParseError(LogError):
    """Malformed syntax in the source document."""

    def __init__(self, message: str, line: int | None = None, position: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {position}" if position is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.position = position


class SchemaError(LogError):
    """Structurally valid document violating the log schema."""

    def __init__(self, message: str, element_id: str | None = None):
        if element_id is not None:
            message = f"{message} [trace {element_id!r}]"
        super().__init__(message)
        self.element_id = element_id


@dataclass(frozen=True)
class LogEvent:
    """One recorded canvas operation on one model element."""

    name: str
    timestamp: int  # epoch milliseconds
    element_id: str
    position: tuple[float, float] | None = None
    edge_source: str | None = None
    edge_target: str | None = None
    label_text: str | None = None
    extras: tuple[tuple[str, str], ...] = ()  # unrecognized source attributes, preserved

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("event name must be non-empty")
        if not isinstance(self.timestamp, int) or self.timestamp < 0:
            raise ValueError(f"timestamp must be a non-negative epoch-ms integer, got {self.timestamp!r}")
        if self.position is not None and len(self.position) != 2:
            raise ValueError("position must carry both x and y")


@dataclass(frozen=True)
class ElementTrace:
    """The ordered event list for one model element."""

    element_id: str
    events: tuple[LogEvent, ...]

    def __post_init__(self) -> None:
        for ev in self.events:
            if ev.element_id != self.element_id:
                raise ValueError(
                    f"event id {ev.element_id!r} does not match trace {self.element_id!r}"
                )
        stamps = [ev.timestamp for ev in self.events]
        if any(a > b for a, b in zip(stamps, stamps[1:])):
            raise ValueError(f"events of trace {self.element_id!r} not sorted by timestamp")


@dataclass(frozen=True)
class EventLog:
    """One full session: traces per model element, plus free-form metadata.

    ``warnings`` collects parse-time diagnostics (reordered events, truncated
    timestamp precision, dropped unknown operations); it is not part of the
    log's value and is ignored by equality.
    """

    log_id: str = ""
    traces: tuple[ElementTrace, ...] = ()
    source_meta: tuple[tuple[str, str], ...] = ()
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        ids = [t.element_id for t in self.traces]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate element ids across traces: {dupes}")

    def events(self) -> Iterator[LogEvent]:
        """All events in global order: by timestamp, ties by trace then record order."""
        indexed = [
            (ev.timestamp, ti, ei, ev)
            for ti, tr in enumerate(self.traces)
            for ei, ev in enumerate(tr.events)
        ]
        indexed.sort(key=lambda item: item[:3])
        for _, _, _, ev in indexed:
            yield ev

    @property
    def event_count(self) -> int:
        return sum(len(t.events) for t in self.traces)

    def trace(self, element_id: str) -> ElementTrace:
        for t in self.traces:
            if t.element_id == element_id:
                return t
        raise KeyError(element_id)


@dataclass(frozen=True)
class ValidationFinding:
    severity: str  # "warn" | "error"
    code: str
    message: str
    element_id: str | None = None


# ---------------------------------------------------------------------------
# timestamp handling


def _parse_timestamp(value: str, where: str, warnings: list[str]) -> int:
    """ISO-8601 timestamp -> epoch ms; naive times are taken as UTC.

    Precision finer than one millisecond cannot be represented and is dropped
    with a warning rather than silently truncated.
    """
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    # datetime.fromisoformat (3.10) wants exactly 3 or 6 fractional digits
    m = re.search(r"\.(\d+)", text)
    if m:
        digits = m.group(1)
        if len(digits) > 3 and digits[3:].strip("0"):
            warnings.append(f"{where}: sub-millisecond precision in {value!r} dropped")
        text = text[: m.start(1)] + digits[:6].ljust(6, "0") + text[m.end(1):]
    try:
        dt = datetime.fromisoformat(text)
    except ValueError as exc:
        raise SchemaError(f"{where}: unparseable timestamp {value!r} ({exc})")
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return (dt - _EPOCH) // _MS


def _format_timestamp(ms: int) -> str:
    return (_EPOCH + ms * _MS).isoformat(timespec="milliseconds")


# ---------------------------------------------------------------------------
# building traces from raw per-element event lists


def _finish_trace(
    element_id: str,
    events: list[LogEvent],
    warnings: list[str],
) -> ElementTrace:
    stamps = [ev.timestamp for ev in events]
    if any(a > b for a, b in zip(stamps, stamps[1:])):
        warnings.append(f"trace {element_id!r}: events re-sorted by timestamp")
        events = sorted(events, key=lambda ev: ev.timestamp)  # stable: record order kept on ties
    return ElementTrace(element_id=element_id, events=tuple(events))


def _drop_unknown(
    element_id: str, events: list[LogEvent], lenient: bool, warnings: list[str]
) -> list[LogEvent]:
    kept = []
    for ev in events:
        if isinstance(resolve(ev.name), UnknownOperation):
            if not lenient:
                raise SchemaError(f"unknown operation name {ev.name!r}", element_id)
            warnings.append(f"trace {element_id!r}: dropped unknown operation {ev.name!r}")
        else:
            kept.append(ev)
    return kept


# ---------------------------------------------------------------------------
# XES subset

_EVENT_KEYS = ("concept:name", "time:timestamp", "id", "x", "y", "source", "target", "label")


def _localname(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _attr_map(elem: ET.Element) -> dict[str, str]:
    out = {}
    for child in elem:
        if _localname(child.tag) in {"string", "date", "int", "float", "boolean"}:
            key = child.get("key")
            if key is not None:
                out[key] = child.get("value", "")
    return out


def _parse_float(value: str, where: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise SchemaError(f"{where}: not a number: {value!r}")


def _parse_xes(data: bytes, lenient: bool) -> EventLog:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, col = exc.position
        raise ParseError(f"malformed XML: {exc.msg.split(':')[0] if hasattr(exc, 'msg') else exc}", line, col)
    if _localname(root.tag) != "log":
        raise SchemaError(f"root element must be <log>, got <{_localname(root.tag)}>")

    warnings: list[str] = []
    log_attrs = _attr_map(root)
    log_id = log_attrs.pop("concept:name", "")
    meta = tuple(sorted(log_attrs.items()))

    traces = []
    for tindex, tr in enumerate(e for e in root if _localname(e.tag) == "trace"):
        tr_attrs = _attr_map(tr)
        element_id = tr_attrs.get("concept:name")
        if not element_id:
            raise SchemaError(f"trace #{tindex} has no concept:name")
        events = []
        for eindex, ev in enumerate(e for e in tr if _localname(e.tag) == "event"):
            attrs = _attr_map(ev)
            where = f"trace {element_id!r} event #{eindex}"
            name = attrs.get("concept:name")
            if not name:
                raise SchemaError(f"{where}: missing concept:name", element_id)
            if "time:timestamp" not in attrs:
                raise SchemaError(f"{where}: missing time:timestamp", element_id)
            ts = _parse_timestamp(attrs["time:timestamp"], where, warnings)
            event_id = attrs.get("id", element_id)
            if event_id != element_id:
                raise SchemaError(
                    f"{where}: id attribute {event_id!r} does not match trace name", element_id
                )
            position = None
            if "x" in attrs or "y" in attrs:
                if not ("x" in attrs and "y" in attrs):
                    raise SchemaError(f"{where}: position needs both x and y", element_id)
                position = (_parse_float(attrs["x"], where), _parse_float(attrs["y"], where))
            extras = tuple(sorted((k, v) for k, v in attrs.items() if k not in _EVENT_KEYS))
            events.append(
                LogEvent(
                    name=name,
                    timestamp=ts,
                    element_id=element_id,
                    position=position,
                    edge_source=attrs.get("source"),
                    edge_target=attrs.get("target"),
                    label_text=attrs.get("label"),
                    extras=extras,
                )
            )
        events = _drop_unknown(element_id, events, lenient, warnings)
        traces.append(_finish_trace(element_id, events, warnings))

    return EventLog(log_id=log_id, traces=tuple(traces), source_meta=meta, warnings=tuple(warnings))


def _xml_escape(value: str) -> str:
    return (
        value.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _write_xes(log: EventLog) -> bytes:
    out = io.StringIO()
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write('<log xes.version="1.0">\n')
    if log.log_id:
        out.write(f'  <string key="concept:name" value="{_xml_escape(log.log_id)}"/>\n')
    for key, value in log.source_meta:
        out.write(f'  <string key="{_xml_escape(key)}" value="{_xml_escape(value)}"/>\n')
    for tr in log.traces:
        out.write("  <trace>\n")
        out.write(f'    <string key="concept:name" value="{_xml_escape(tr.element_id)}"/>\n')
        for ev in tr.events:
            out.write("    <event>\n")
            out.write(f'      <string key="concept:name" value="{_xml_escape(ev.name)}"/>\n')
            out.write(f'      <date key="time:timestamp" value="{_format_timestamp(ev.timestamp)}"/>\n')
            out.write(f'      <string key="id" value="{_xml_escape(ev.element_id)}"/>\n')
            if ev.position is not None:
                out.write(f'      <float key="x" value="{ev.position[0]!r}"/>\n')
                out.write(f'      <float key="y" value="{ev.position[1]!r}"/>\n')
            if ev.edge_source is not None:
                out.write(f'      <string key="source" value="{_xml_escape(ev.edge_source)}"/>\n')
            if ev.edge_target is not None:
                out.write(f'      <string key="target" value="{_xml_escape(ev.edge_target)}"/>\n')
            if ev.label_text is not None:
                out.write(f'      <string key="label" value="{_xml_escape(ev.label_text)}"/>\n')
            for key, value in ev.extras:
                out.write(f'      <string key="{_xml_escape(key)}" value="{_xml_escape(value)}"/>\n')
            out.write("    </event>\n")
        out.write("  </trace>\n")
    out.write("</log>\n")
    return out.getvalue().encode("utf-8")


# ---------------------------------------------------------------------------
# flat CSV

_CSV_COLUMNS = ("element_id", "name", "timestamp_ms", "x", "y", "source", "target", "label")


def _parse_csv(data: bytes, lenient: bool) -> EventLog:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8: {exc}")

    warnings: list[str] = []
    log_id = ""
    meta: list[tuple[str, str]] = []
    rows: list[tuple[int, list[str]]] = []
    empty_traces: list[tuple[int, str]] = []  # (position among rows, element_id)
    header: list[str] | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped.lstrip("#").strip()
            if body.startswith("log:"):
                log_id = body[len("log:"):].strip()
            elif body.startswith("meta "):
                key, sep, value = body[len("meta "):].partition("=")
                if sep:
                    meta.append((key.strip(), value.strip()))
            elif body.startswith("trace:"):  # placeholder for an event-less trace
                empty_traces.append((len(rows), body[len("trace:"):].strip()))
            continue
        parsed = next(csv.reader([line]))
        if header is None:
            header = [h.strip() for h in parsed]
            missing = [c for c in ("element_id", "name", "timestamp_ms") if c not in header]
            if missing:
                raise ParseError(f"header missing required column(s): {', '.join(missing)}", lineno)
            unknown = [c for c in header if c not in _CSV_COLUMNS]
            if unknown:
                warnings.append(f"ignoring unknown column(s): {', '.join(unknown)}")
            continue
        rows.append((lineno, parsed))

    if header is None:
        raise ParseError("no header row")

    by_element: dict[str, list[LogEvent]] = {}
    markers = {pos: [] for pos, _ in empty_traces}
    for pos, eid in empty_traces:
        markers[pos].append(eid)
    for row_index, (lineno, parsed) in enumerate(rows):
        for eid in markers.get(row_index, ()):
            by_element.setdefault(eid, [])
        if len(parsed) < len(header):
            parsed = parsed + [""] * (len(header) - len(parsed))
        record = dict(zip(header, (v.strip() for v in parsed)))
        element_id = record.get("element_id", "")
        name = record.get("name", "")
        if not element_id:
            raise SchemaError(f"line {lineno}: empty element_id")
        if not name:
            raise SchemaError(f"line {lineno}: empty operation name", element_id)
        ts_text = record.get("timestamp_ms", "")
        try:
            ts = int(ts_text)
        except ValueError:
            raise ParseError(f"timestamp_ms must be an integer, got {ts_text!r}", lineno)
        if ts < 0:
            raise SchemaError(f"line {lineno}: negative timestamp {ts}", element_id)
        x_text, y_text = record.get("x", ""), record.get("y", "")
        if bool(x_text) != bool(y_text):
            raise SchemaError(f"line {lineno}: position needs both x and y", element_id)
        position = (
            (_parse_float(x_text, f"line {lineno}"), _parse_float(y_text, f"line {lineno}"))
            if x_text
            else None
        )
        by_element.setdefault(element_id, []).append(
            LogEvent(
                name=name,
                timestamp=ts,
                element_id=element_id,
                position=position,
                edge_source=record.get("source") or None,
                edge_target=record.get("target") or None,
                label_text=record.get("label") or None,
            )
        )

    for eid in markers.get(len(rows), ()):  # trailing event-less traces
        by_element.setdefault(eid, [])

    traces = []
    for element_id, events in by_element.items():  # insertion order = first appearance
        events = _drop_unknown(element_id, events, lenient, warnings)
        traces.append(_finish_trace(element_id, events, warnings))
    return EventLog(
        log_id=log_id, traces=tuple(traces), source_meta=tuple(sorted(meta)), warnings=tuple(warnings)
    )


def _write_csv(log: EventLog) -> bytes:
    out = io.StringIO(newline="")
    if log.log_id:
        out.write(f"# log: {log.log_id}\n")
    for key, value in log.source_meta:
        out.write(f"# meta {key}={value}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_CSV_COLUMNS)
    for tr in log.traces:
        if not tr.events:
            out.write(f"# trace: {tr.element_id}\n")
        for ev in tr.events:
            x, y = ("", "") if ev.position is None else (repr(ev.position[0]), repr(ev.position[1]))
            writer.writerow(
                [
                    ev.element_id,
                    ev.name,
                    ev.timestamp,
                    x,
                    y,
                    ev.edge_source or "",
                    ev.edge_target or "",
                    ev.label_text or "",
                ]
            )
    return out.getvalue().encode("utf-8")


# ---------------------------------------------------------------------------
# public API


def parse_log(raw: bytes | str, format: str = "xes", *, lenient: bool = True) -> EventLog:
    """Parse a byte stream in the declared format into an EventLog.

    Out-of-order events within a trace are re-sorted (stable) with a warning
    record on the result.  Unknown operation names are dropped with a warning
    when ``lenient`` (the default) and rejected with a SchemaError otherwise.
    """
    data = raw.encode("utf-8") if isinstance(raw, str) else raw
    if format == "xes":
        return _parse_xes(data, lenient)
    if format == "csv":
        return _parse_csv(data, lenient)
    raise ValueError(f"unsupported format {format!r}; expected one of {FORMATS}")


def write_log(log: EventLog, format: str = "xes") -> bytes:
    """Serialize an EventLog; ``parse_log(write_log(log))`` round-trips by value."""
    if format == "xes":
        return _write_xes(log)
    if format == "csv":
        return _write_csv(log)
    raise ValueError(f"unsupported format {format!r}; expected one of {FORMATS}")


def sniff_format(data: bytes) -> str:
    """Guess 'xes' or 'csv' from content (XML prolog or <log> root vs. anything else)."""
    head = data.lstrip()[:64]
    return "xes" if head.startswith(b"<") else "csv"


_CREATE_OPS = {k for k in OperationKind if category_of(k) is OperationCategory.CREATE}
_DELETE_OPS = {k for k in OperationKind if category_of(k) is OperationCategory.DELETE}


def validate_log(log: EventLog) -> list[ValidationFinding]:
    """Structural lint of a parsed log; findings are data, not failures.

    Checks: each trace starts with the creation of its element; no operations
    recorded after the element's deletion; edge creations carry their
    source/target ids (their absence degrades the graph-based sort orders);
    operation names belong to the known vocabulary.
    """
    findings: list[ValidationFinding] = []
    for tr in log.traces:
        if not tr.events:
            continue
        first = resolve(tr.events[0].name)
        if not (isinstance(first, OperationKind) and first in _CREATE_OPS):
            findings.append(
                ValidationFinding(
                    "warn",
                    "first-op-not-create",
                    f"first operation is {tr.events[0].name}, expected the element's creation",
                    tr.element_id,
                )
            )
        deleted_at: int | None = None
        for ev in tr.events:
            kind = resolve(ev.name)
            if isinstance(kind, UnknownOperation):
                findings.append(
                    ValidationFinding(
                        "warn", "unknown-operation", f"operation {ev.name!r} not in vocabulary", tr.element_id
                    )
                )
                continue
            if deleted_at is not None:
                findings.append(
                    ValidationFinding(
                        "warn",
                        "op-after-delete",
                        f"{ev.name} recorded after the element was deleted",
                        tr.element_id,
                    )
                )
            if kind in _DELETE_OPS:
                deleted_at = ev.timestamp
            if kind is OperationKind.CREATE_EDGE and (ev.edge_source is None or ev.edge_target is None):
                findings.append(
                    ValidationFinding(
                        "warn",
                        "edge-missing-endpoints",
                        "edge creation without source/target ids; graph sorts degrade",
                        tr.element_id,
                    )
                )
    return findings
