"""Deterministic SVG rendering of chart models, and dot hit-testing.

The emitted document is a plain SVG 1.1 subset (rect, circle, polygon, line,
text) whose bytes are a pure function of (chart, options): fixed 6-decimal
numeric formatting, stable element order, no timestamps or randomness.  Every
dot element carries CSS classes ``dot op-<name> el-<kind>`` plus
``data-element-id`` / ``data-t-actual`` attributes so a UI can restyle or
inspect dots without re-deriving geometry.

Timelines render top to bottom in model order, each with its element id label
at the start of the line.  Dots draw in time order, so simultaneous
operations stack with the latest on top; dense vertical stacks are a feature
of the chart, not an artifact.  Dots outside the window are not clipped
(zooming or scrolling is the viewer's concern), so glyph count always equals
the model's visible-dot count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Iterator
from xml.sax.saxutils import escape, quoteattr

from .chart import ChartModel, Dot
from .taxonomy import Shape, element_kind_of

__all__ = [
    "HitDot",
    "Rect",
    "RenderOptions",
    "hit_test",
    "render_options_from_dict",
    "render_svg",
]

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


@dataclass(frozen=True)
class RenderOptions:
    canvas_width: float = 1000.0
    canvas_height: float = 600.0
    dot_size: float = 6.0
    show_labels: bool = True
    show_legend: bool = True
    zoom_x: float = 1.0
    zoom_y: float = 1.0
    background: tuple[int, int, int] = (255, 255, 255)
    gridline_color: tuple[int, int, int] = (221, 221, 221)

    def __post_init__(self) -> None:
        for name in ("canvas_width", "canvas_height", "dot_size", "zoom_x", "zoom_y"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class Rect:
    """Pixel rectangle with inclusive bounds; zero area is a point probe."""

    x0: float
    y0: float
    x1: float
    y1: float

    def normalized(self) -> "Rect":
        return Rect(
            min(self.x0, self.x1), min(self.y0, self.y1),
            max(self.x0, self.x1), max(self.y0, self.y1),
        )

    def contains(self, x: float, y: float) -> bool:
        r = self.normalized()
        return r.x0 <= x <= r.x1 and r.y0 <= y <= r.y1


@dataclass(frozen=True)
class HitDot:
    element_id: str
    operation: str
    t_actual: int
    x: float
    y: float


_RENDER_KEYS = {
    "width": "canvas_width",
    "height": "canvas_height",
    "dot-size": "dot_size",
    "show-labels": "show_labels",
    "show-legend": "show_legend",
    "zoom-x": "zoom_x",
    "zoom-y": "zoom_y",
}


def render_options_from_dict(raw: object) -> RenderOptions:
    """Parse the render-options JSON subset (zoom, labels, canvas, dot size)."""
    from .chart import ConfigError  # local import; chart does not depend on render

    if raw is None:
        return RenderOptions()
    if not isinstance(raw, dict):
        raise ConfigError("render", "expected an object")
    kw = {}
    for key, value in raw.items():
        if key not in _RENDER_KEYS:
            raise ConfigError(f"render.{key}", "unknown render option")
        kw[_RENDER_KEYS[key]] = value
    try:
        return RenderOptions(**kw)
    except (TypeError, ValueError) as exc:
        raise ConfigError("render", str(exc))


_LABEL_GUTTER = 90.0
_RIGHT_MARGIN = 10.0
_TOP_MARGIN = 26.0
_LEGEND_ROW_H = 16.0
_LEGEND_COLS = 4


def _fmt(value: float) -> str:
    if value == 0:  # avoid "-0.000000"
        value = 0.0
    return f"{value:.6f}"


def _rgb(color: tuple[int, int, int]) -> str:
    return f"rgb({color[0]},{color[1]},{color[2]})"


def _css_op(name: str) -> str:
    return name.lower().replace("_", "-")


@dataclass(frozen=True)
class _Layout:
    plot_x: float
    plot_y: float
    plot_w: float
    plot_h: float
    band_h: float

    def x_of(self, chart: ChartModel, opts: RenderOptions, t_display: float) -> float:
        return self.plot_x + (t_display - chart.t0) / chart.window_ms * self.plot_w * opts.zoom_x

    def y_of(self, opts: RenderOptions, band_index: int) -> float:
        return self.plot_y + (band_index + 0.5) * self.band_h * opts.zoom_y


def _layout(chart: ChartModel, opts: RenderOptions) -> _Layout:
    legend_h = 0.0
    if opts.show_legend:
        rows = math.ceil(len(chart.legend) / _LEGEND_COLS)
        legend_h = rows * _LEGEND_ROW_H + 12.0
    gutter = _LABEL_GUTTER if opts.show_labels else 10.0
    plot_w = max(1.0, opts.canvas_width - gutter - _RIGHT_MARGIN)
    plot_h = max(1.0, opts.canvas_height - _TOP_MARGIN - legend_h - 8.0)
    bands = max(1, len(chart.timelines))
    return _Layout(gutter, _TOP_MARGIN, plot_w, plot_h, plot_h / bands)


def _dot_centers(
    chart: ChartModel, opts: RenderOptions
) -> Iterator[tuple[Dot, float, float]]:
    lay = _layout(chart, opts)
    for band, tl in enumerate(chart.timelines):
        y = lay.y_of(opts, band)
        for dot in tl.dots:
            if dot.visible:
                yield dot, lay.x_of(chart, opts, dot.t_display), y


def _glyph(dot: Dot, x: float, y: float, size: float) -> str:
    half = size / 2.0
    classes = f"dot op-{_css_op(dot.operation.value)} el-{element_kind_of(dot.operation).value}"
    attrs = (
        f' class="{classes}" fill="{_rgb(dot.style.color)}"'
        f" data-element-id={quoteattr(dot.element_id)}"
        f' data-t-actual="{dot.t_actual}"'
    )
    if dot.style.shape is Shape.CIRCLE:
        return f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(half)}"{attrs}/>'
    if dot.style.shape is Shape.SQUARE:
        return (
            f'<rect x="{_fmt(x - half)}" y="{_fmt(y - half)}"'
            f' width="{_fmt(size)}" height="{_fmt(size)}"{attrs}/>'
        )
    if dot.style.shape is Shape.DIAMOND:
        d = half * math.sqrt(2.0)
        points = f"{_fmt(x)},{_fmt(y - d)} {_fmt(x + d)},{_fmt(y)} {_fmt(x)},{_fmt(y + d)} {_fmt(x - d)},{_fmt(y)}"
        return f'<polygon points="{points}"{attrs}/>'
    # downward triangle
    points = f"{_fmt(x - half)},{_fmt(y - half)} {_fmt(x + half)},{_fmt(y - half)} {_fmt(x)},{_fmt(y + half)}"
    return f'<polygon points="{points}"{attrs}/>'


def render_svg(chart: ChartModel, opts: RenderOptions = RenderOptions()) -> bytes:
    """Render the chart to SVG bytes; identical inputs give identical bytes."""
    lay = _layout(chart, opts)
    w, h = opts.canvas_width, opts.canvas_height
    lines: list[str] = []
    lines.append('<?xml version="1.0" encoding="UTF-8"?>')
    lines.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(w)}" height="{_fmt(h)}" '
        f'viewBox="0 0 {_fmt(w)} {_fmt(h)}">'
    )
    lines.append(
        f'<rect class="background" x="0.000000" y="0.000000" width="{_fmt(w)}" '
        f'height="{_fmt(h)}" fill="{_rgb(opts.background)}"/>'
    )

    # window bounds, top corners
    t_end = chart.t0 + chart.window_ms
    start_text = (_EPOCH + timedelta(milliseconds=chart.t0)).isoformat(timespec="milliseconds")
    end_text = (_EPOCH + timedelta(milliseconds=t_end)).isoformat(timespec="milliseconds")
    lines.append(
        f'<text class="window-start" x="{_fmt(lay.plot_x)}" y="16.000000" '
        f'font-size="11" font-family="sans-serif">{escape(start_text)}</text>'
    )
    lines.append(
        f'<text class="window-end" x="{_fmt(lay.plot_x + lay.plot_w)}" y="16.000000" '
        f'font-size="11" font-family="sans-serif" text-anchor="end">{escape(end_text)}</text>'
    )

    for t in chart.gridline_times:
        x = lay.x_of(chart, opts, float(t))
        lines.append(
            f'<line class="gridline" x1="{_fmt(x)}" y1="{_fmt(lay.plot_y)}" '
            f'x2="{_fmt(x)}" y2="{_fmt(lay.plot_y + lay.plot_h)}" '
            f'stroke="{_rgb(opts.gridline_color)}" stroke-width="1"/>'
        )

    for band, tl in enumerate(chart.timelines):
        y = lay.y_of(opts, band)
        lines.append(
            f'<line class="timeline" x1="{_fmt(lay.plot_x)}" y1="{_fmt(y)}" '
            f'x2="{_fmt(lay.plot_x + lay.plot_w)}" y2="{_fmt(y)}" '
            f'stroke="rgb(238,238,238)" stroke-width="1"/>'
        )
        if opts.show_labels:
            lines.append(
                f'<text class="timeline-label" x="{_fmt(lay.plot_x - 6.0)}" y="{_fmt(y + 3.0)}" '
                f'font-size="10" font-family="sans-serif" text-anchor="end">'
                f"{escape(tl.element_id)}</text>"
            )

    for tl_index, tl in enumerate(chart.timelines):
        y = lay.y_of(opts, tl_index)
        for dot in tl.dots:
            if not dot.visible:
                continue
            x = lay.x_of(chart, opts, dot.t_display)
            lines.append(_glyph(dot, x, y, opts.dot_size))

    if opts.show_legend:
        legend_y = lay.plot_y + lay.plot_h + 18.0
        col_w = (opts.canvas_width - 20.0) / _LEGEND_COLS
        for i, (kind, style) in enumerate(chart.legend):
            cx = 10.0 + (i % _LEGEND_COLS) * col_w + 6.0
            cy = legend_y + (i // _LEGEND_COLS) * _LEGEND_ROW_H
            swatch = Dot(
                element_id="", operation=kind, t_actual=0, t_display=0.0, style=style
            )
            glyph = _glyph(swatch, cx, cy, 8.0).replace('class="dot ', 'class="legend-swatch ')
            glyph = glyph.replace(' data-element-id=""', "").replace(' data-t-actual="0"', "")
            lines.append(glyph)
            lines.append(
                f'<text class="legend-label" x="{_fmt(cx + 10.0)}" y="{_fmt(cy + 3.5)}" '
                f'font-size="9" font-family="sans-serif">{escape(kind.value)}</text>'
            )

    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def hit_test(chart: ChartModel, opts: RenderOptions, rect: Rect) -> list[HitDot]:
    """All visible dots whose rendered centers fall inside the rectangle.

    Bounds are inclusive, so a zero-area rectangle at a dot center hits it.
    Geometry matches render_svg exactly (shared layout).
    """
    hits = []
    for dot, x, y in _dot_centers(chart, opts):
        if rect.contains(x, y):
            hits.append(
                HitDot(
                    element_id=dot.element_id,
                    operation=dot.operation.value,
                    t_actual=dot.t_actual,
                    x=x,
                    y=y,
                )
            )
    return hits
