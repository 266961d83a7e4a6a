"""Dotted-chart engine for modeling-session event logs.

Parse a session log (XES subset or flat CSV), replay it into the evolving
process-model graph, build timeline charts over the full configuration
vocabulary (time options, intervals, color/shape coding, eight sort orders,
filters, style overrides), render them to deterministic SVG, and quantify the
session's modeling-behavior patterns.
"""

from .analytics import DetectorConfig, SessionProfile, compute_profile
from .chart import (
    ChartConfig,
    ChartModel,
    ColorBy,
    FilterSpec,
    ShapeBy,
    SortBy,
    TimeInterval,
    TimeOption,
    build_chart,
    config_from_dict,
    config_to_dict,
)
from .logmodel import (
    ElementTrace,
    EventLog,
    LogEvent,
    ParseError,
    SchemaError,
    parse_log,
    validate_log,
    write_log,
)
from .render import HitDot, Rect, RenderOptions, hit_test, render_svg
from .replay import (
    ModelGraph,
    OrderingUnavailable,
    create_order_from_start,
    distance_from_start,
    replay,
)
from .taxonomy import (
    ClassifyError,
    DotStyle,
    ElementKind,
    OperationCategory,
    OperationKind,
    Shape,
    classify,
    default_style,
    legend_table,
)

__version__ = "0.1.0"
