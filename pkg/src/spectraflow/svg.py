"""Tiny SVG renderers for the CSV outputs (no plotting dependency).

Every public function takes the text of a CSV file written by
:mod:`spectraflow.cli` and returns an SVG document, so a figure is a pure
function of its data file.
"""

from __future__ import annotations

import csv
import io
from collections import defaultdict

__all__ = ["spectrum_svg", "uncertainty_svg", "histogram_svg"]

WIDTH, HEIGHT = 800, 560
LEFT, RIGHT, TOP, BOTTOM = 80, 30, 50, 70
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _rows(csv_text: str):
    return list(csv.DictReader(io.StringIO(csv_text)))


class _Frame:
    def __init__(self, xlim, ylim):
        (self.x0, self.x1), (self.y0, self.y1) = xlim, ylim
        if self.x1 == self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 == self.y0:
            self.y1 = self.y0 + 1.0

    def x(self, v: float) -> float:
        return LEFT + (v - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)

    def y(self, v: float) -> float:
        return HEIGHT - BOTTOM - (v - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)


def _document(frame: _Frame, title: str, xlabel: str, ylabel: str, body: list[str]) -> str:
    x_axis = HEIGHT - BOTTOM
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="28" text-anchor="middle" font-size="18" '
        f'font-family="sans-serif">{_escape(title)}</text>',
        f'<line x1="{LEFT}" y1="{x_axis}" x2="{WIDTH - RIGHT}" y2="{x_axis}" stroke="black"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{x_axis}" stroke="black"/>',
    ]
    for i in range(5):
        xv = frame.x0 + i * (frame.x1 - frame.x0) / 4
        yv = frame.y0 + i * (frame.y1 - frame.y0) / 4
        px, py = frame.x(xv), frame.y(yv)
        out.append(f'<text x="{px:.1f}" y="{x_axis + 18}" text-anchor="middle" '
                   f'font-size="12" font-family="sans-serif">{xv:.3g}</text>')
        out.append(f'<text x="{LEFT - 8}" y="{py + 4:.1f}" text-anchor="end" '
                   f'font-size="12" font-family="sans-serif">{yv:.3g}</text>')
    out.append(f'<text x="{(LEFT + WIDTH - RIGHT) / 2:.1f}" y="{HEIGHT - 25}" '
               f'text-anchor="middle" font-size="14" font-family="sans-serif">'
               f'{_escape(xlabel)}</text>')
    out.append(f'<text x="20" y="{(TOP + x_axis) / 2:.1f}" text-anchor="middle" font-size="14" '
               f'font-family="sans-serif" transform="rotate(-90 20 {(TOP + x_axis) / 2:.1f})">'
               f'{_escape(ylabel)}</text>')
    out.extend(body)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def spectrum_svg(csv_text: str, title: str = "Energy levels") -> str:
    """One polyline per tracked line (columns ``g, line_id, energy``)."""
    lines = defaultdict(list)
    for row in _rows(csv_text):
        lines[int(row["line_id"])].append((float(row["g"]), float(row["energy"])))
    points = [pt for pts in lines.values() for pt in pts]
    if not points:
        raise ValueError("spectrum CSV has no data rows")
    frame = _Frame((min(p[0] for p in points), max(p[0] for p in points)),
                   (min(p[1] for p in points), max(p[1] for p in points)))
    body = []
    for line_id in sorted(lines):
        coords = " ".join(f"{frame.x(g):.2f},{frame.y(e):.2f}" for g, e in lines[line_id])
        color = PALETTE[line_id % len(PALETTE)]
        body.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" '
                    f'points="{coords}"/>')
    return _document(frame, title, "g", "E", body)


def uncertainty_svg(csv_text: str, title: str = "Uncertainty product") -> str:
    """Scatter of ``delta`` against ``g``, one dot per eigenstate."""
    rows = _rows(csv_text)
    if not rows:
        raise ValueError("uncertainty CSV has no data rows")
    gs = [float(r["g"]) for r in rows]
    frame = _Frame((min(gs), max(gs)), (0.0, 0.5))
    body = [
        f'<circle cx="{frame.x(float(r["g"])):.2f}" cy="{frame.y(float(r["delta"])):.2f}" '
        f'r="1.3" fill="{PALETTE[int(r["eigen_index"]) % len(PALETTE)]}"/>'
        for r in rows
    ]
    return _document(frame, title, "g", "delta", body)


def histogram_svg(csv_text: str, title: str = "Distribution of delta") -> str:
    """Bars of ``probability`` over ``[bin_lo, bin_hi]``."""
    rows = _rows(csv_text)
    if not rows:
        raise ValueError("histogram CSV has no data rows")
    bins = [(float(r["bin_lo"]), float(r["bin_hi"]), float(r["probability"])) for r in rows]
    frame = _Frame((bins[0][0], bins[-1][1]), (0.0, max(1e-12, max(b[2] for b in bins))))
    body = []
    for lo, hi, prob in bins:
        x0, x1 = frame.x(lo), frame.x(hi)
        y = frame.y(prob)
        body.append(f'<rect x="{x0:.2f}" y="{y:.2f}" width="{max(x1 - x0 - 1, 0.5):.2f}" '
                    f'height="{frame.y(0.0) - y:.2f}" fill="#1f77b4"/>')
    return _document(frame, title, "delta", "probability", body)
