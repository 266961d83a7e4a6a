"""Per-session report figures for the batch analyze path.

Renders a compact matplotlib overview of one session profile next to the
delimited output: the operation mix, the dot raster over time with pauses and
delete bursts shaded, and the headline pattern classifications.  These
figures are for human report reading; the chart SVG renderer stays the single
source of dot geometry.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .analytics import SessionProfile
from .logmodel import EventLog
from .taxonomy import PALETTE, UnknownOperation, default_style, resolve

_CATEGORY_ORDER = ["create", "move", "delete", "rename", "reconnect", "bendpoint"]
_CATEGORY_COLOR = {
    "create": tuple(c / 255 for c in PALETTE["bright_green"]),
    "move": tuple(c / 255 for c in PALETTE["bright_blue"]),
    "delete": tuple(c / 255 for c in PALETTE["bright_red"]),
    "rename": tuple(c / 255 for c in PALETTE["orange"]),
    "reconnect": tuple(c / 255 for c in PALETTE["light_purple"]),
    "bendpoint": tuple(c / 255 for c in PALETTE["dark_grey"]),
}


def save_profile_figure(log: EventLog, profile: SessionProfile, path: Path) -> None:
    """Write a one-page PNG overview for this session."""
    fig, (ax_mix, ax_time) = plt.subplots(
        2, 1, figsize=(9, 5), gridspec_kw={"height_ratios": [1, 2]}
    )
    fig.suptitle(
        f"{profile.log_id or 'session'} — {profile.total_operations} operations, "
        f"{profile.element_count} elements, {profile.duration_ms / 60000:.1f} min",
        fontsize=11,
    )

    counts = dict(profile.category_counts)
    values = [counts.get(c, 0) for c in _CATEGORY_ORDER]
    ax_mix.bar(_CATEGORY_ORDER, values, color=[_CATEGORY_COLOR[c] for c in _CATEGORY_ORDER])
    ax_mix.set_ylabel("operations")
    ax_mix.tick_params(labelsize=8)

    lanes = {tr.element_id: i for i, tr in enumerate(log.traces)}
    for tr in log.traces:
        for ev in tr.events:
            kind = resolve(ev.name)
            if isinstance(kind, UnknownOperation):
                continue
            style = default_style(kind)
            ax_time.plot(
                ev.timestamp / 60000.0,
                lanes[tr.element_id],
                marker="o",
                markersize=2.5,
                color=tuple(c / 255 for c in style.color),
                linestyle="none",
            )
    for start, end in profile.pause_intervals:
        ax_time.axvspan(start / 60000.0, end / 60000.0, color="#f2f2f2")
    for t, _ in profile.delete_bursts:
        ax_time.axvline(t / 60000.0, color="#d41111", linewidth=0.8, alpha=0.5)
    ax_time.set_xlabel("minutes (epoch)")
    ax_time.set_ylabel("element")
    ax_time.tick_params(labelsize=8)
    ax_time.set_title(
        f"moves: {profile.move_timing_class} · creation: {profile.orientation} · "
        f"chunks: {len(profile.chunks)} · chaotic: {'yes' if profile.chaotic else 'no'}",
        fontsize=9,
    )

    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
