"""Turn (log, graph, config) into a chart model ready for rendering.

A chart has one horizontal timeline per model element and one styled dot per
recorded operation.  Building a chart runs a fixed pipeline: classify each
event, style it (defaults, then user overrides, then the color-by/shape-by
collapses), transform timestamps per the time option, sort the timelines, and
apply the filters as visibility flags.  Filters never remove timelines, only
dots, so filtered charts keep their vertical layout comparable.

The chart window defaults to one hour so charts of different sessions stay
visually comparable; dots beyond the window stay in the model flagged
out-of-window and the renderer or UI decides clipping versus scrolling.

ChartConfig has a canonical JSON form (kebab-case enum values) shared by the
CLI flags, the HTTP API and the browser UI.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime, timedelta, timezone
from enum import Enum
from typing import Mapping, Sequence

from .logmodel import EventLog
from .replay import (
    ElementOrder,
    ModelGraph,
    OrderingUnavailable,
    create_order_from_start,
    distance_from_start,
)
from .taxonomy import (
    ClassifyError,
    DotStyle,
    ElementKind,
    OperationKind,
    Shape,
    classify,
    default_style,
)

__all__ = [
    "ChartConfig",
    "ChartModel",
    "ChartNotice",
    "ColorBy",
    "ConfigError",
    "Dot",
    "FilterSpec",
    "ShapeBy",
    "SortBy",
    "TimeInterval",
    "TimeOption",
    "Timeline",
    "apply_filters",
    "build_chart",
    "config_from_dict",
    "config_to_dict",
    "gridlines",
    "sort_timelines",
    "transform_times",
]

DEFAULT_WINDOW_MS = 3_600_000  # one hour

# color applied to every dot when color coding is turned off
UNIFORM_COLOR = (128, 128, 128)


class TimeOption(Enum):
    ACTUAL = "actual"
    RELATIVE_TIME = "relative-time"
    RELATIVE_RATIO = "relative-ratio"


class TimeInterval(Enum):
    L1 = "l1"
    L10 = "l10"
    L100 = "l100"
    L500 = "l500"
    SECONDS = "seconds"
    MINUTES = "minutes"
    HALF_HOURS = "half-hours"
    HOURS = "hours"
    DAYS = "days"
    WEEKS = "weeks"
    MONTHS = "months"
    YEARS = "years"


class ColorBy(Enum):
    NONE = "none"
    OPERATION = "operation"


class ShapeBy(Enum):
    NONE = "none"
    MODEL_ELEMENT = "model-element"


class SortBy(Enum):
    NONE = "none"
    MODEL_ELEMENT = "model-element"
    NUMBER_OF_OPERATIONS = "number-of-operations"
    DURATION = "duration"
    DISTANCE_FROM_START = "distance-from-start"
    CREATE_ORDER_FROM_START = "create-order-from-start"
    FIRST_OPERATION = "first-operation"
    LAST_OPERATION = "last-operation"


class ConfigError(ValueError):
    """Invalid chart configuration; names the offending field."""

    def __init__(self, fieldname: str, message: str):
        super().__init__(f"{fieldname}: {message}")
        self.field = fieldname


@dataclass(frozen=True)
class FilterSpec:
    hide_element_kinds: frozenset[ElementKind] = frozenset()
    hide_operation_kinds: frozenset[OperationKind] = frozenset()
    hide_elements_with_operation: frozenset[OperationKind] = frozenset()

    def __bool__(self) -> bool:
        return bool(
            self.hide_element_kinds or self.hide_operation_kinds or self.hide_elements_with_operation
        )


@dataclass(frozen=True)
class ChartConfig:
    time_option: TimeOption = TimeOption.ACTUAL
    time_interval: TimeInterval = TimeInterval.HOURS
    color_by: ColorBy = ColorBy.OPERATION
    shape_by: ShapeBy = ShapeBy.MODEL_ELEMENT
    sort_by: SortBy = SortBy.DISTANCE_FROM_START
    descending: bool = False
    window_ms: int = DEFAULT_WINDOW_MS
    filters: FilterSpec = FilterSpec()
    style_overrides: tuple[tuple[OperationKind, DotStyle], ...] = ()

    def __post_init__(self) -> None:
        if self.window_ms <= 0:
            raise ConfigError("window-ms", "must be positive")


@dataclass(frozen=True)
class Dot:
    element_id: str
    operation: OperationKind
    t_actual: int
    t_display: float
    style: DotStyle
    visible: bool = True
    in_window: bool = True


@dataclass(frozen=True)
class Timeline:
    element_id: str
    kind: ElementKind | None
    dots: tuple[Dot, ...]

    @property
    def first_t(self) -> int | None:
        return self.dots[0].t_actual if self.dots else None

    @property
    def last_t(self) -> int | None:
        return self.dots[-1].t_actual if self.dots else None


@dataclass(frozen=True)
class ChartNotice:
    code: str
    message: str


@dataclass(frozen=True)
class ChartModel:
    timelines: tuple[Timeline, ...]
    t0: int
    window_ms: int
    gridline_times: tuple[int, ...]
    legend: tuple[tuple[OperationKind, DotStyle], ...]
    config: ChartConfig
    notices: tuple[ChartNotice, ...] = ()

    @property
    def visible_dot_count(self) -> int:
        return sum(1 for tl in self.timelines for d in tl.dots if d.visible)


# ---------------------------------------------------------------------------
# pipeline stages


def _effective_styles(config: ChartConfig) -> dict[OperationKind, DotStyle]:
    styles = {kind: default_style(kind) for kind in OperationKind}
    for kind, style in config.style_overrides:
        styles[kind] = style
    if config.color_by is ColorBy.NONE:
        styles = {k: replace(s, color=UNIFORM_COLOR) for k, s in styles.items()}
    if config.shape_by is ShapeBy.NONE:
        styles = {k: replace(s, shape=Shape.CIRCLE) for k, s in styles.items()}
    return styles


def transform_times(
    dots: Sequence[Dot], time_option: TimeOption, window_ms: int
) -> tuple[Dot, ...]:
    """Recompute t_display for one timeline's dots (sorted by time).

    Actual keeps real timestamps.  Relative-time shifts the line so its first
    dot sits at the window start.  Relative-ratio additionally stretches the
    line so its last dot sits at the window end; lines with fewer than two
    distinct timestamps collapse to the window start.
    """
    if not dots:
        return ()
    if time_option is TimeOption.ACTUAL:
        return tuple(replace(d, t_display=float(d.t_actual)) for d in dots)
    first = dots[0].t_actual
    if time_option is TimeOption.RELATIVE_TIME:
        return tuple(replace(d, t_display=float(d.t_actual - first)) for d in dots)
    last = dots[-1].t_actual
    if last == first:
        return tuple(replace(d, t_display=0.0) for d in dots)
    return tuple(
        replace(d, t_display=(d.t_actual - first) * window_ms / (last - first)) for d in dots
    )


def sort_timelines(
    timelines: Sequence[Timeline],
    sort_by: SortBy,
    descending: bool,
    graph: ModelGraph | None,
) -> tuple[list[Timeline], list[ChartNotice]]:
    """Order timelines per the sort option; all sorts are stable over log order.

    Descending reverses the comparison, never the tie order.  The graph-based
    sorts fall back to first-operation order (with a notice) when the graph is
    missing or yields no start.
    """
    notices: list[ChartNotice] = []
    order: ElementOrder | None = None
    if sort_by in (SortBy.DISTANCE_FROM_START, SortBy.CREATE_ORDER_FROM_START):
        try:
            if graph is None:
                raise OrderingUnavailable("no replayed graph supplied")
            order = (
                distance_from_start(graph)
                if sort_by is SortBy.DISTANCE_FROM_START
                else create_order_from_start(graph)
            )
            if order.unit_lengths:
                notices.append(
                    ChartNotice("unit-lengths", "missing positions; sorted by hop count")
                )
        except OrderingUnavailable as exc:
            notices.append(ChartNotice("sort-fallback", f"fallback: first-operation ({exc})"))
            sort_by = SortBy.FIRST_OPERATION

    big = float("inf")

    def key(tl: Timeline):
        if sort_by is SortBy.MODEL_ELEMENT:
            return tl.element_id
        if sort_by is SortBy.NUMBER_OF_OPERATIONS:
            return len(tl.dots)
        if sort_by is SortBy.DURATION:
            return (tl.last_t - tl.first_t) if tl.dots else big
        if sort_by is SortBy.FIRST_OPERATION:
            return tl.first_t if tl.dots else big
        if sort_by is SortBy.LAST_OPERATION:
            return tl.last_t if tl.dots else big
        if order is not None:
            return order.ranks.get(tl.element_id, big)
        return 0  # SortBy.NONE: log trace order

    # empty timelines have no sortable timestamp; pin them to +inf descending-proof
    if sort_by is SortBy.NONE:
        ordered = list(timelines)
    else:
        ordered = sorted(timelines, key=key, reverse=descending)
    return ordered, notices


def apply_filters(timelines: Sequence[Timeline], filters: FilterSpec) -> tuple[Timeline, ...]:
    """Set dot visibility; timelines are never removed, only emptied.

    A dot is hidden when its element kind is hidden, its operation kind is
    hidden, or its whole timeline carries at least one operation of a
    hide-elements-with kind.
    """
    out = []
    for tl in timelines:
        line_hidden = bool(filters.hide_elements_with_operation) and any(
            d.operation in filters.hide_elements_with_operation for d in tl.dots
        )
        dots = tuple(
            replace(
                d,
                visible=not (
                    line_hidden
                    or tl.kind in filters.hide_element_kinds
                    or d.operation in filters.hide_operation_kinds
                ),
            )
            for d in tl.dots
        )
        out.append(replace(tl, dots=dots))
    return tuple(out)


_STEP_MS = {
    TimeInterval.L1: 1,
    TimeInterval.L10: 10,
    TimeInterval.L100: 100,
    TimeInterval.L500: 500,
    TimeInterval.SECONDS: 1_000,
    TimeInterval.MINUTES: 60_000,
    TimeInterval.HALF_HOURS: 1_800_000,
    TimeInterval.HOURS: 3_600_000,
    TimeInterval.DAYS: 86_400_000,
}
_WEEK_MS = 7 * 86_400_000
_MONDAY_OFFSET_MS = 4 * 86_400_000  # the epoch began on a Thursday
_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def gridlines(t0: int, window_ms: int, interval: TimeInterval) -> tuple[int, ...]:
    """Gridline timestamps within [t0, t0+window], both ends inclusive.

    Millisecond grids (l1/l10/l100/l500) anchor at the first operation (t0);
    the calendar grids anchor at UTC boundaries.
    """
    end = t0 + window_ms
    if interval in (TimeInterval.L1, TimeInterval.L10, TimeInterval.L100, TimeInterval.L500):
        step = _STEP_MS[interval]
        return tuple(range(t0, end + 1, step))
    if interval in _STEP_MS:  # second..day boundaries are plain UTC epoch multiples
        step = _STEP_MS[interval]
        first = -(-t0 // step) * step
        return tuple(range(first, end + 1, step))
    if interval is TimeInterval.WEEKS:
        first = -(-(t0 - _MONDAY_OFFSET_MS) // _WEEK_MS) * _WEEK_MS + _MONDAY_OFFSET_MS
        return tuple(range(first, end + 1, _WEEK_MS))

    # months / years: walk calendar boundaries
    out = []
    dt = _EPOCH + timedelta(milliseconds=t0)
    if interval is TimeInterval.MONTHS:
        boundary = dt.replace(day=1, hour=0, minute=0, second=0, microsecond=0)
    else:
        boundary = dt.replace(month=1, day=1, hour=0, minute=0, second=0, microsecond=0)
    while True:
        ms = (boundary - _EPOCH) // timedelta(milliseconds=1)
        if ms > end:
            break
        if ms >= t0:
            out.append(ms)
        if interval is TimeInterval.MONTHS:
            boundary = (
                boundary.replace(year=boundary.year + 1, month=1)
                if boundary.month == 12
                else boundary.replace(month=boundary.month + 1)
            )
        else:
            boundary = boundary.replace(year=boundary.year + 1)
    return tuple(out)


def build_chart(log: EventLog, graph: ModelGraph | None, config: ChartConfig) -> ChartModel:
    """Run the full pipeline: classify, style, transform, sort, filter.

    Events with unknown operation names are dropped with a notice; styling is
    never guessed for them.
    """
    styles = _effective_styles(config)
    notices: list[ChartNotice] = []
    dropped: set[str] = set()

    timelines: list[Timeline] = []
    for trace in log.traces:
        dots = []
        kind: ElementKind | None = None
        for ev in trace.events:
            try:
                op, element, _ = classify(ev.name)
            except ClassifyError:
                if ev.name not in dropped:
                    dropped.add(ev.name)
                    notices.append(
                        ChartNotice("unknown-operation", f"dropped unstyled operation {ev.name!r}")
                    )
                continue
            kind = kind or element
            dots.append(
                Dot(
                    element_id=trace.element_id,
                    operation=op,
                    t_actual=ev.timestamp,
                    t_display=float(ev.timestamp),
                    style=styles[op],
                )
            )
        timelines.append(Timeline(element_id=trace.element_id, kind=kind, dots=tuple(dots)))

    if config.time_option is TimeOption.ACTUAL:
        stamps = [d.t_actual for tl in timelines for d in tl.dots]
        t0 = min(stamps) if stamps else 0
    else:
        t0 = 0

    timelines = [
        replace(tl, dots=transform_times(tl.dots, config.time_option, config.window_ms))
        for tl in timelines
    ]
    ordered, sort_notices = sort_timelines(timelines, config.sort_by, config.descending, graph)
    notices.extend(sort_notices)
    filtered = apply_filters(ordered, config.filters)
    end = t0 + config.window_ms
    filtered = tuple(
        replace(
            tl,
            dots=tuple(replace(d, in_window=t0 <= d.t_display <= end) for d in tl.dots),
        )
        for tl in filtered
    )

    return ChartModel(
        timelines=filtered,
        t0=t0,
        window_ms=config.window_ms,
        gridline_times=gridlines(t0, config.window_ms, config.time_interval),
        legend=tuple((kind, styles[kind]) for kind in OperationKind),
        config=config,
        notices=tuple(notices),
    )


# ---------------------------------------------------------------------------
# canonical JSON form


def _enum_from(value: object, enum_cls, fieldname: str):
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise ConfigError(fieldname, f"expected one of [{allowed}], got {value!r}")


def _style_from_dict(raw: object, fieldname: str) -> DotStyle:
    if not isinstance(raw, Mapping):
        raise ConfigError(fieldname, "expected an object with color/shape")
    color = raw.get("color")
    if isinstance(color, str):
        color = _hex_to_rgb(color, fieldname)
    if not (isinstance(color, Sequence) and len(color) == 3):
        raise ConfigError(fieldname, f"color must be [r,g,b] or #rrggbb, got {raw.get('color')!r}")
    shape = _enum_from(raw.get("shape"), Shape, fieldname)
    try:
        return DotStyle(color=tuple(int(c) for c in color), shape=shape)
    except (TypeError, ValueError) as exc:
        raise ConfigError(fieldname, str(exc))


def _hex_to_rgb(value: str, fieldname: str) -> tuple[int, int, int]:
    text = value.lstrip("#")
    if len(text) != 6:
        raise ConfigError(fieldname, f"expected #rrggbb, got {value!r}")
    try:
        return tuple(int(text[i : i + 2], 16) for i in (0, 2, 4))  # type: ignore[return-value]
    except ValueError:
        raise ConfigError(fieldname, f"expected #rrggbb, got {value!r}")


def _operation_from(value: object, fieldname: str) -> OperationKind:
    # accept both the kebab JSON spelling and the literal log name
    if isinstance(value, str):
        for kind in OperationKind:
            if value == kind.value or value == kind.value.lower().replace("_", "-"):
                return kind
    raise ConfigError(fieldname, f"unknown operation kind {value!r}")


_CONFIG_KEYS = {
    "time-option",
    "time-interval",
    "color-by",
    "shape-by",
    "sort-by",
    "descending",
    "window-ms",
    "filters",
    "style-overrides",
}
_FILTER_KEYS = {"hide-element-kinds", "hide-operation-kinds", "hide-elements-with-operation"}


def config_from_dict(raw: Mapping[str, object]) -> ChartConfig:
    """Parse the canonical JSON form; raises ConfigError naming the bad field."""
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown configuration field")
    cfg = ChartConfig()
    kw: dict[str, object] = {}
    if "time-option" in raw:
        kw["time_option"] = _enum_from(raw["time-option"], TimeOption, "time-option")
    if "time-interval" in raw:
        kw["time_interval"] = _enum_from(raw["time-interval"], TimeInterval, "time-interval")
    if "color-by" in raw:
        kw["color_by"] = _enum_from(raw["color-by"], ColorBy, "color-by")
    if "shape-by" in raw:
        kw["shape_by"] = _enum_from(raw["shape-by"], ShapeBy, "shape-by")
    if "sort-by" in raw:
        kw["sort_by"] = _enum_from(raw["sort-by"], SortBy, "sort-by")
    if "descending" in raw:
        if not isinstance(raw["descending"], bool):
            raise ConfigError("descending", f"expected a boolean, got {raw['descending']!r}")
        kw["descending"] = raw["descending"]
    if "window-ms" in raw:
        if not isinstance(raw["window-ms"], int) or isinstance(raw["window-ms"], bool):
            raise ConfigError("window-ms", f"expected an integer, got {raw['window-ms']!r}")
        if raw["window-ms"] <= 0:
            raise ConfigError("window-ms", "must be positive")
        kw["window_ms"] = raw["window-ms"]
    if "filters" in raw:
        f = raw["filters"]
        if not isinstance(f, Mapping):
            raise ConfigError("filters", "expected an object")
        bad = set(f) - _FILTER_KEYS
        if bad:
            raise ConfigError(f"filters.{sorted(bad)[0]}", "unknown filter field")
        kw["filters"] = FilterSpec(
            hide_element_kinds=frozenset(
                _enum_from(v, ElementKind, "filters.hide-element-kinds")
                for v in f.get("hide-element-kinds", ())
            ),
            hide_operation_kinds=frozenset(
                _operation_from(v, "filters.hide-operation-kinds")
                for v in f.get("hide-operation-kinds", ())
            ),
            hide_elements_with_operation=frozenset(
                _operation_from(v, "filters.hide-elements-with-operation")
                for v in f.get("hide-elements-with-operation", ())
            ),
        )
    if "style-overrides" in raw:
        o = raw["style-overrides"]
        if not isinstance(o, Mapping):
            raise ConfigError("style-overrides", "expected an object keyed by operation")
        overrides = []
        for name, style_raw in sorted(o.items()):
            kind = _operation_from(name, "style-overrides")
            overrides.append((kind, _style_from_dict(style_raw, f"style-overrides.{name}")))
        kw["style_overrides"] = tuple(overrides)
    return replace(cfg, **kw)  # type: ignore[arg-type]


def chart_model_to_dict(chart: ChartModel) -> dict[str, object]:
    """JSON form of a built chart (the model-json response body)."""
    return {
        "t0": chart.t0,
        "window-ms": chart.window_ms,
        "gridline-times": list(chart.gridline_times),
        "timelines": [
            {
                "element-id": tl.element_id,
                "kind": tl.kind.value if tl.kind else None,
                "dots": [
                    {
                        "operation": d.operation.value,
                        "t-actual": d.t_actual,
                        "t-display": d.t_display,
                        "color": list(d.style.color),
                        "shape": d.style.shape.value,
                        "visible": d.visible,
                        "in-window": d.in_window,
                    }
                    for d in tl.dots
                ],
            }
            for tl in chart.timelines
        ],
        "legend": [
            {"operation": kind.value, "color": list(style.color), "shape": style.shape.value}
            for kind, style in chart.legend
        ],
        "notices": [{"code": n.code, "message": n.message} for n in chart.notices],
        "config": config_to_dict(chart.config),
    }


def config_to_dict(config: ChartConfig) -> dict[str, object]:
    """Canonical JSON form of a config (kebab-case enum values)."""
    return {
        "time-option": config.time_option.value,
        "time-interval": config.time_interval.value,
        "color-by": config.color_by.value,
        "shape-by": config.shape_by.value,
        "sort-by": config.sort_by.value,
        "descending": config.descending,
        "window-ms": config.window_ms,
        "filters": {
            "hide-element-kinds": sorted(k.value for k in config.filters.hide_element_kinds),
            "hide-operation-kinds": sorted(k.value for k in config.filters.hide_operation_kinds),
            "hide-elements-with-operation": sorted(
                k.value for k in config.filters.hide_elements_with_operation
            ),
        },
        "style-overrides": {
            kind.value: {"color": list(style.color), "shape": style.shape.value}
            for kind, style in config.style_overrides
        },
    }
