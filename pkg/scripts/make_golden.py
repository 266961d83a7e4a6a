#!/usr/bin/env python3
"""Regenerate the checked-in golden SVG for the chain fixture.

Run after a deliberate renderer change, review the diff visually, commit.
"""

from __future__ import annotations

from pathlib import Path

from ppmchart.chart import ChartConfig, build_chart
from ppmchart.fixtures import chain_log
from ppmchart.render import RenderOptions, render_svg
from ppmchart.replay import replay

out = Path(__file__).parent.parent / "tests" / "golden" / "chain_default.svg"
out.parent.mkdir(parents=True, exist_ok=True)
log = chain_log((2.0, 4.0))
out.write_bytes(render_svg(build_chart(log, replay(log), ChartConfig()), RenderOptions()))
print(f"wrote {out}")
