"""Minimal SVG line and scatter plots written as plain text."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT, MARGIN = 640, 420, 60
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f")


@dataclass
class Series:
    x: object
    y: object
    label: str = ""
    scatter: bool = False


def _ticks(lo, hi, n=5):
    return np.linspace(lo, hi, n)


def render(series, xlabel="", ylabel="", title="", markers=()) -> str:
    xs = np.concatenate([np.asarray(s.x, dtype=float) for s in series])
    ys = np.concatenate([np.asarray(s.y, dtype=float) for s in series])
    finite = np.isfinite(xs) & np.isfinite(ys)
    x0, x1 = (xs[finite].min(), xs[finite].max()) if finite.any() else (0.0, 1.0)
    y0, y1 = (ys[finite].min(), ys[finite].max()) if finite.any() else (0.0, 1.0)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def px(x):
        return MARGIN + (x - x0) / (x1 - x0) * pw

    def py(y):
        return HEIGHT - MARGIN - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<text x="{px(t):.1f}" y="{HEIGHT - MARGIN + 15}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<text x="{MARGIN - 5}" y="{py(t) + 4:.1f}" text-anchor="end">{t:.3g}</text>')
    for m in markers:
        out.append(f'<line x1="{px(m):.1f}" y1="{MARGIN}" x2="{px(m):.1f}" y2="{HEIGHT - MARGIN}" stroke="#bbb" stroke-dasharray="3,3"/>')
    for i, s in enumerate(series):
        color = COLORS[i % len(COLORS)]
        pts = [(px(a), py(b)) for a, b in zip(np.asarray(s.x, float), np.asarray(s.y, float)) if np.isfinite(a) and np.isfinite(b)]
        if s.scatter:
            out += [f'<circle cx="{a:.1f}" cy="{b:.1f}" r="3" fill="{color}"/>' for a, b in pts]
        elif pts:
            path = " ".join(f"{a:.1f},{b:.1f}" for a, b in pts)
            out.append(f'<polyline points="{path}" fill="none" stroke="{color}"/>')
        if s.label:
            out.append(f'<text x="{WIDTH - MARGIN + 5}" y="{MARGIN + 14 * i + 10}" fill="{color}">{escape(s.label)}</text>')
    out.append(f'<text x="{WIDTH / 2}" y="{HEIGHT - 15}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="15" y="{HEIGHT / 2}" transform="rotate(-90 15 {HEIGHT / 2})" text-anchor="middle">{escape(ylabel)}</text>')
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="{MARGIN - 20}" text-anchor="middle">{escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write(path, series, **kwargs):
    Path(path).write_text(render(series, **kwargs))
