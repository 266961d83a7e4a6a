"""HTTP API for interactive chart analysis.

Hosts uploaded session logs in memory (optionally preloading a directory) and
builds charts, profiles and hit-test tooltip payloads on demand.  Chart
building is stateless: a response depends only on the stored log and the
request body, so identical requests return identical bytes.  Stored logs are
immutable; no endpoint mutates one.

Endpoints (JSON unless noted):

    POST /api/logs                  upload an XES or CSV log   -> 201 LogHandle
    GET  /api/logs                  list uploaded logs
    GET  /api/logs/{id}/validate    lint findings
    POST /api/logs/{id}/chart       {config?, render?, response-kind?}
                                    -> image/svg+xml bytes or chart model JSON
    GET  /api/logs/{id}/profile     ?thresholds=<json object>  -> session profile
    POST /api/logs/{id}/hit-test    {config?, render?, rect}   -> dots under rect
    GET  /api/legend                default style table

Every 4xx body is {"code", "message", "field"?}.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, fields
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .analytics import DetectorConfig, compute_profile, profile_to_dict
from .chart import ChartConfig, ConfigError, build_chart, chart_model_to_dict, config_from_dict
from .logmodel import EventLog, LogError, parse_log, sniff_format, validate_log
from .render import Rect, hit_test, render_options_from_dict, render_svg
from .replay import ModelGraph, replay
from .taxonomy import legend_table

__all__ = ["create_app"]


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, field: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.field = field

    def body(self) -> dict[str, str]:
        out = {"code": self.code, "message": self.message}
        if self.field is not None:
            out["field"] = self.field
        return out


@dataclass(frozen=True)
class StoredLog:
    id: str
    name: str
    log: EventLog
    graph: ModelGraph
    uploaded_at: str

    def handle(self) -> dict[str, object]:
        return {
            "id": self.id,
            "name": self.name,
            "trace-count": len(self.log.traces),
            "event-count": self.log.event_count,
            "uploaded-at": self.uploaded_at,
        }


class LogStore:
    """Many readers, serialized id assignment."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._logs: dict[str, StoredLog] = {}
        self._counter = 0

    def add(self, name: str, log: EventLog) -> StoredLog:
        with self._lock:
            self._counter += 1
            log_id = f"log-{self._counter:04d}"
            stored = StoredLog(
                id=log_id,
                name=name,
                log=log,
                graph=replay(log),
                uploaded_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            )
            self._logs[log_id] = stored
        return stored

    def get(self, log_id: str) -> StoredLog:
        stored = self._logs.get(log_id)
        if stored is None:
            raise ApiError(404, "unknown-log", f"no log with id {log_id!r}")
        return stored

    def all(self) -> list[StoredLog]:
        return list(self._logs.values())


def _parse_upload(data: bytes, declared: str | None, content_type: str | None) -> EventLog:
    fmt = declared
    if fmt is None and content_type:
        base = content_type.split(";")[0].strip().lower()
        if base in ("text/csv", "application/csv"):
            fmt = "csv"
        elif base.endswith("xml"):
            fmt = "xes"
    if fmt is None:
        fmt = sniff_format(data)
    if fmt not in ("xes", "csv"):
        raise ApiError(400, "bad-format", f"unsupported format {fmt!r}", field="format")
    try:
        return parse_log(data, fmt)
    except LogError as exc:
        raise ApiError(400, "parse-error", str(exc))


def _config_from_body(body: dict) -> ChartConfig:
    raw = body.get("config", {})
    if not isinstance(raw, dict):
        raise ApiError(422, "invalid-config", "config must be an object", field="config")
    try:
        return config_from_dict(raw)
    except ConfigError as exc:
        raise ApiError(422, "invalid-config", str(exc), field=exc.field)


def _render_from_body(body: dict):
    try:
        return render_options_from_dict(body.get("render"))
    except ConfigError as exc:
        raise ApiError(422, "invalid-render-options", str(exc), field=exc.field)


async def _json_body(request: Request) -> dict:
    raw = await request.body()
    if not raw:
        return {}
    try:
        body = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ApiError(400, "bad-json", f"request body is not valid JSON: {exc}")
    if not isinstance(body, dict):
        raise ApiError(400, "bad-json", "request body must be a JSON object")
    return body


def create_app(log_dir: Path | None = None, static_dir: Path | None = None) -> FastAPI:
    """Build the service; optionally preload every *.xes / *.csv under log_dir."""
    app = FastAPI(title="ppmchart", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = LogStore()
    app.state.store = store

    if log_dir is not None:
        for path in sorted(log_dir.glob("*")):
            if path.suffix.lower() not in (".xes", ".xml", ".csv"):
                continue
            fmt = "csv" if path.suffix.lower() == ".csv" else "xes"
            try:
                store.add(path.name, parse_log(path.read_bytes(), fmt))
            except LogError:
                continue  # skip unreadable files on rescan

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(status_code=exc.status, content=exc.body())

    @app.post("/api/logs", status_code=201)
    async def upload_log(request: Request, name: str | None = None, format: str | None = None):
        data = await request.body()
        if not data:
            raise ApiError(400, "empty-body", "no log content in request body")
        log = _parse_upload(data, format, request.headers.get("content-type"))
        stored = store.add(name or log.log_id or "uploaded", log)
        return stored.handle()

    @app.get("/api/logs")
    async def list_logs():
        return [s.handle() for s in store.all()]

    @app.get("/api/logs/{log_id}/validate")
    async def validate(log_id: str):
        stored = store.get(log_id)
        return [
            {
                "severity": f.severity,
                "code": f.code,
                "message": f.message,
                "element-id": f.element_id,
            }
            for f in validate_log(stored.log)
        ]

    @app.post("/api/logs/{log_id}/chart")
    async def chart(log_id: str, request: Request):
        stored = store.get(log_id)
        body = await _json_body(request)
        config = _config_from_body(body)
        response_kind = body.get("response-kind", "svg")
        if response_kind not in ("svg", "model-json"):
            raise ApiError(
                422, "invalid-config", f"unknown response-kind {response_kind!r}",
                field="response-kind",
            )
        model = build_chart(stored.log, stored.graph, config)
        if response_kind == "model-json":
            return chart_model_to_dict(model)
        svg = render_svg(model, _render_from_body(body))
        headers = {"X-Chart-Notices": json.dumps([n.code for n in model.notices])}
        return Response(content=svg, media_type="image/svg+xml", headers=headers)

    @app.get("/api/logs/{log_id}/profile")
    async def profile(log_id: str, thresholds: str | None = None):
        stored = store.get(log_id)
        config = DetectorConfig()
        if thresholds:
            try:
                raw = json.loads(thresholds)
            except json.JSONDecodeError as exc:
                raise ApiError(422, "invalid-thresholds", f"not valid JSON: {exc}", field="thresholds")
            if not isinstance(raw, dict):
                raise ApiError(422, "invalid-thresholds", "expected a JSON object", field="thresholds")
            known = {f.name.replace("_", "-"): f.name for f in fields(DetectorConfig)}
            kw = {}
            for key, value in raw.items():
                if key not in known:
                    raise ApiError(422, "invalid-thresholds", f"unknown threshold {key!r}", field=key)
                kw[known[key]] = value
            try:
                config = DetectorConfig(**kw)
            except TypeError as exc:
                raise ApiError(422, "invalid-thresholds", str(exc), field="thresholds")
        return profile_to_dict(compute_profile(stored.log, config))

    @app.post("/api/logs/{log_id}/hit-test")
    async def hit(log_id: str, request: Request):
        stored = store.get(log_id)
        body = await _json_body(request)
        config = _config_from_body(body)
        opts = _render_from_body(body)
        rect_raw = body.get("rect")
        if not isinstance(rect_raw, dict) or not all(k in rect_raw for k in ("x0", "y0", "x1", "y1")):
            raise ApiError(422, "invalid-rect", "rect must carry x0, y0, x1, y1", field="rect")
        try:
            rect = Rect(*(float(rect_raw[k]) for k in ("x0", "y0", "x1", "y1")))
        except (TypeError, ValueError):
            raise ApiError(422, "invalid-rect", "rect coordinates must be numbers", field="rect")
        model = build_chart(stored.log, stored.graph, config)
        return [
            {
                "element-id": h.element_id,
                "operation": h.operation,
                "t-actual": h.t_actual,
                "x": h.x,
                "y": h.y,
            }
            for h in hit_test(model, opts, rect)
        ]

    @app.get("/api/legend")
    async def legend():
        return legend_table()

    if static_dir is not None and static_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
