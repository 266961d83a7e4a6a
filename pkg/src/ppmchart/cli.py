"""Batch command line: render charts, analyze sessions, validate logs, serve.

    ppmchart render  session.xes -o chart.svg [--sort ... --hide-op ... ...]
    ppmchart analyze a.xes b.csv --csv -o profiles.csv [--figures-dir figs/]
    ppmchart validate session.xes
    ppmchart serve --port 8000 [--logs dir/]

Flags mirror the kebab-case configuration JSON one to one; explicit flags
override --config file values, which override the defaults.  Exit codes:
0 success, 1 usage error, 2 data error.  Diagnostics go to stderr prefixed
``error:`` or ``warn:``.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import fields
from pathlib import Path

from .analytics import (
    DetectorConfig,
    compute_profile,
    profile_csv_header,
    profile_csv_row,
    profile_to_dict,
)
from .chart import ChartConfig, ConfigError, build_chart, config_from_dict
from .logmodel import LogError, parse_log, sniff_format, validate_log
from .render import RenderOptions, render_svg
from .replay import ReplayError, replay

__all__ = ["main", "run"]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


_CHART_FLAGS = {
    # dest -> config JSON key
    "time_option": "time-option",
    "time_interval": "time-interval",
    "color_by": "color-by",
    "shape_by": "shape-by",
    "sort_by": "sort-by",
    "window_ms": "window-ms",
}


def _add_chart_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="chart configuration JSON file")
    p.add_argument("--time-option", choices=["actual", "relative-time", "relative-ratio"])
    p.add_argument(
        "--interval",
        dest="time_interval",
        choices=[
            "l1", "l10", "l100", "l500", "seconds", "minutes", "half-hours",
            "hours", "days", "weeks", "months", "years",
        ],
    )
    p.add_argument("--color-by", choices=["none", "operation"])
    p.add_argument("--shape-by", choices=["none", "model-element"])
    p.add_argument(
        "--sort",
        dest="sort_by",
        choices=[
            "none", "model-element", "number-of-operations", "duration",
            "distance-from-start", "create-order-from-start", "first-operation",
            "last-operation",
        ],
    )
    p.add_argument("--descending", action="store_true", default=None)
    p.add_argument("--window-ms", type=int)
    p.add_argument("--hide-element", action="append", metavar="KIND",
                   help="hide all operations on this element kind (repeatable)")
    p.add_argument("--hide-op", action="append", metavar="OP",
                   help="hide this operation kind (repeatable)")
    p.add_argument("--hide-with-op", action="append", metavar="OP",
                   help="hide all elements carrying this operation (repeatable)")
    p.add_argument("--style-override", action="append", metavar="OP=#RRGGBB[,SHAPE]",
                   help="override one operation's color and optionally shape (repeatable)")


def _chart_config(args: argparse.Namespace) -> ChartConfig:
    raw: dict[str, object] = {}
    if args.config is not None:
        try:
            raw.update(json.loads(args.config.read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise LogError(f"cannot read config file {args.config}: {exc}")
    for dest, key in _CHART_FLAGS.items():
        value = getattr(args, dest, None)
        if value is not None:
            raw[key] = value
    if args.descending is not None:
        raw["descending"] = args.descending
    filters = dict(raw.get("filters", {}))  # type: ignore[arg-type]
    if args.hide_element:
        filters["hide-element-kinds"] = args.hide_element
    if args.hide_op:
        filters["hide-operation-kinds"] = args.hide_op
    if args.hide_with_op:
        filters["hide-elements-with-operation"] = args.hide_with_op
    if filters:
        raw["filters"] = filters
    if args.style_override:
        overrides = dict(raw.get("style-overrides", {}))  # type: ignore[arg-type]
        for item in args.style_override:
            name, sep, rest = item.partition("=")
            if not sep:
                raise ConfigError("style-overrides", f"expected OP=#RRGGBB[,SHAPE], got {item!r}")
            color, _, shape = rest.partition(",")
            overrides[name] = {"color": color, "shape": shape or "circle"}
        raw["style-overrides"] = overrides
    return config_from_dict(raw)


def _render_options(args: argparse.Namespace) -> RenderOptions:
    return RenderOptions(
        canvas_width=args.width,
        canvas_height=args.height,
        dot_size=args.dot_size,
        show_labels=not args.no_labels,
        show_legend=not args.no_legend,
        zoom_x=args.zoom_x,
        zoom_y=args.zoom_y,
    )


def _read_log(path: Path, fmt: str):
    data = path.read_bytes()
    if fmt == "auto":
        fmt = "csv" if path.suffix.lower() == ".csv" else (
            "xes" if path.suffix.lower() in (".xes", ".xml") else sniff_format(data)
        )
    log = parse_log(data, fmt)
    for w in log.warnings:
        print(f"warn: {path}: {w}", file=sys.stderr)
    return log


def _detector_config(args: argparse.Namespace) -> DetectorConfig:
    kw = {}
    for f in fields(DetectorConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            kw[f.name] = value
    return DetectorConfig(**kw)


def _cmd_render(args: argparse.Namespace) -> int:
    log = _read_log(args.log, args.format)
    config = _chart_config(args)
    chart = build_chart(log, replay(log), config)
    for notice in chart.notices:
        print(f"warn: {notice.code}: {notice.message}", file=sys.stderr)
    svg = render_svg(chart, _render_options(args))
    if args.output is None:
        sys.stdout.buffer.write(svg)
    else:
        args.output.write_bytes(svg)
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    config = _detector_config(args)
    logs = [_read_log(path, args.format) for path in args.logs]
    with ThreadPoolExecutor(max_workers=min(8, max(1, len(logs)))) as pool:
        profiles = list(pool.map(lambda lg: compute_profile(lg, config), logs))

    if args.csv:
        lines = [profile_csv_header()]
        lines += [profile_csv_row(p) for p in profiles]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps([profile_to_dict(p) for p in profiles], indent=2) + "\n"
    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text, encoding="utf-8")

    if args.figures_dir is not None:
        from .report import save_profile_figure

        args.figures_dir.mkdir(parents=True, exist_ok=True)
        for path, log, profile in zip(args.logs, logs, profiles):
            save_profile_figure(log, profile, args.figures_dir / (path.stem + ".png"))
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    log = _read_log(args.log, args.format)
    findings = validate_log(log)
    print(f"{len(findings)} findings")
    for f in findings:
        where = f" [{f.element_id}]" if f.element_id else ""
        print(f"{f.severity}: {f.code}{where}: {f.message}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(log_dir=args.logs, static_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def run(argv: list[str] | None = None) -> int:
    parser = _Parser(prog="ppmchart", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_render = sub.add_parser("render", help="render a chart SVG for one log")
    p_render.add_argument("log", type=Path)
    p_render.add_argument("--format", choices=["auto", "xes", "csv"], default="auto")
    _add_chart_flags(p_render)
    p_render.add_argument("-o", "--output", type=Path)
    p_render.add_argument("--width", type=float, default=1000.0)
    p_render.add_argument("--height", type=float, default=600.0)
    p_render.add_argument("--dot-size", type=float, default=6.0)
    p_render.add_argument("--zoom-x", type=float, default=1.0)
    p_render.add_argument("--zoom-y", type=float, default=1.0)
    p_render.add_argument("--no-labels", action="store_true")
    p_render.add_argument("--no-legend", action="store_true")
    p_render.set_defaults(func=_cmd_render)

    p_analyze = sub.add_parser("analyze", help="emit session profiles for one or more logs")
    p_analyze.add_argument("logs", nargs="+", type=Path)
    p_analyze.add_argument("--format", choices=["auto", "xes", "csv"], default="auto")
    group = p_analyze.add_mutually_exclusive_group()
    group.add_argument("--json", action="store_true", help="JSON output (default)")
    group.add_argument("--csv", action="store_true", help="one CSV row per log")
    p_analyze.add_argument("-o", "--output", type=Path)
    p_analyze.add_argument("--figures-dir", type=Path,
                           help="also write a PNG report figure per log")
    for f in fields(DetectorConfig):
        flag = "--" + f.name.replace("_", "-")
        p_analyze.add_argument(flag, type=type(f.default), default=None, dest=f.name)
    p_analyze.set_defaults(func=_cmd_analyze)

    p_validate = sub.add_parser("validate", help="lint a log and print findings")
    p_validate.add_argument("log", type=Path)
    p_validate.add_argument("--format", choices=["auto", "xes", "csv"], default="auto")
    p_validate.set_defaults(func=_cmd_validate)

    p_serve = sub.add_parser("serve", help="start the HTTP analysis service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--logs", type=Path, help="directory of logs to preload")
    p_serve.add_argument("--ui", type=Path, help="static directory with the browser UI")
    p_serve.set_defaults(func=_cmd_serve)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (LogError, ReplayError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(run())
