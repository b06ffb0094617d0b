"""CSV and SVG writers for scenario results."""

from __future__ import annotations

import json
import math
from xml.sax.saxutils import escape

import numpy as np

from .experiments import ScenarioResult

DEFAULT_SERIES = {
    "single_dd": ["S"],
    "optimal_coupling": ["tau_E"],
    "singlet_pair": ["EoF", "S_pair"],
    "measure_compare": ["D"],
    "tomography_dump": ["min_eigenvalue", "tp_deviation"],
}
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def format_real(x) -> str:
    """Shortest round-trip decimal; integral values drop the trailing ``.0``."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if x == 0.0:
        return "0"
    s = repr(x)
    return s[:-2] if s.endswith(".0") else s


def render_csv(result: ScenarioResult) -> str:
    names = list(result.columns)
    cols = [np.asarray(result.columns[n], dtype=float) for n in names]
    lines = [",".join(names)]
    for row in zip(*cols):
        lines.append(",".join(format_real(v) for v in row))
    lines.append("# config " + json.dumps(result.metadata, sort_keys=True))
    for key, value in result.summary.items():
        lines.append(f"# {key} = {json.dumps(value)}")
    return "\n".join(lines) + "\n"


def write_csv(result: ScenarioResult, sink) -> None:
    with open(sink, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_csv(result))


def nice_ticks(lo: float, hi: float) -> list[float]:
    """Between 5 and 10 round tick positions inside ``[lo, hi]``."""
    span = hi - lo
    best = None
    for exp in range(math.floor(math.log10(span)) - 2, math.floor(math.log10(span)) + 2):
        for mant in (1.0, 2.0, 2.5, 5.0):
            step = mant * 10.0**exp
            first = math.ceil(lo / step - 1e-9)
            last = math.floor(hi / step + 1e-9)
            count = last - first + 1
            if 5 <= count <= 10 and (best is None or abs(count - 7) < abs(best[0] - 7)):
                best = (count, step, first)
    if best is None:
        return [float(v) for v in np.linspace(lo, hi, 6)]
    count, step, first = best
    return [round((first + k) * step, 12) for k in range(count)]


def _padded_range(values) -> tuple[float, float]:
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi - lo < 1e-12 * max(1.0, abs(lo)):
        pad = 0.5 * abs(lo) if lo != 0 else 0.5
        return lo - pad, hi + pad
    m = 0.05 * (hi - lo)
    return lo - m, hi + m


def render_svg(result: ScenarioResult, series=None, xlabel=None, ylabel="") -> str:
    series = list(series or DEFAULT_SERIES.get(result.metadata.get("scenario"), []))
    if not series:
        raise ValueError("select at least one series to plot")
    xname = result.index_name
    x = np.asarray(result.columns[xname], dtype=float)
    ys = {}
    for name in series:
        y = np.asarray(result.columns[name], dtype=float)
        ok = np.isfinite(x) & np.isfinite(y)
        if not ok.any():
            raise ValueError(f"series {name!r} has no finite values")
        ys[name] = (x[ok], y[ok])
    x0, x1 = _padded_range(np.concatenate([v[0] for v in ys.values()]))
    y0, y1 = _padded_range(np.concatenate([v[1] for v in ys.values()]))

    w, h = 800, 600
    left, right, top, bottom = 90, 30, 60, 70
    pw, ph = w - left - right, h - top - bottom

    def sx(v):
        return left + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return top + (y1 - v) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" width="{w}" height="{h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in nice_ticks(x0, x1):
        px = sx(t)
        out.append(f'<line x1="{px:.2f}" y1="{top + ph}" x2="{px:.2f}" y2="{top + ph + 6}" stroke="black"/>')
        out.append(
            f'<text x="{px:.2f}" y="{top + ph + 22}" font-size="13" text-anchor="middle">{format_real(t)}</text>'
        )
    for t in nice_ticks(y0, y1):
        py = sy(t)
        out.append(f'<line x1="{left - 6}" y1="{py:.2f}" x2="{left}" y2="{py:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{left - 10}" y="{py + 4:.2f}" font-size="13" text-anchor="end">{format_real(t)}</text>'
        )
    out.append(
        f'<text x="{left + pw / 2}" y="{h - 20}" font-size="15" text-anchor="middle">'
        f"{escape(xlabel or xname)}</text>"
    )
    if ylabel:
        out.append(
            f'<text x="20" y="{top + ph / 2}" font-size="15" text-anchor="middle" '
            f'transform="rotate(-90 20 {top + ph / 2})">{escape(ylabel)}</text>'
        )
    out.append(f'<clipPath id="plot"><rect x="{left}" y="{top}" width="{pw}" height="{ph}"/></clipPath>')
    for k, (name, (xs, yv)) in enumerate(ys.items()):
        color = COLORS[k % len(COLORS)]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(xs, yv))
        out.append(
            f'<polyline clip-path="url(#plot)" fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>'
        )
        # legend runs in a row above the frame, clear of the data
        lx = left + 150 * k
        out.append(f'<line x1="{lx}" y1="30" x2="{lx + 30}" y2="30" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 38}" y="34" font-size="13">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg_plot(result: ScenarioResult, sink, series=None, xlabel=None, ylabel="") -> None:
    text = render_svg(result, series, xlabel, ylabel)
    with open(sink, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
