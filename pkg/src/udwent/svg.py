"""Deterministic log-log SVG for the entanglement-boundary figure.

Everything is formatted with fixed precision and emitted in a fixed order, so
the same inputs always give the same bytes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 720, 540
LEFT, RIGHT, TOP, BOTTOM = 84, 24, 44, 64

STYLES = {
    "vacuum": ('stroke="#000000" stroke-width="1.6"', "Minkowski vacuum"),
    "thermal": ('stroke="#c0392b" stroke-width="1.8"', "thermal Minkowski"),
    "desitter": ('stroke="#1f4e9c" stroke-width="1.8" stroke-dasharray="7,4"', "de Sitter vacuum"),
}


@dataclass(frozen=True)
class LogAxes:
    x_lo: int
    x_hi: int
    y_lo: int
    y_hi: int

    def px(self, x: float) -> float:
        w = WIDTH - LEFT - RIGHT
        return LEFT + w * (math.log10(x) - self.x_lo) / (self.x_hi - self.x_lo)

    def py(self, y: float) -> float:
        h = HEIGHT - TOP - BOTTOM
        return TOP + h * (self.y_hi - math.log10(y)) / (self.y_hi - self.y_lo)

    def inside(self, x: float, y: float) -> bool:
        return 10.0**self.x_lo <= x <= 10.0**self.x_hi and 10.0**self.y_lo <= y <= 10.0**self.y_hi


def _f(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _points(axes: LogAxes, pts) -> str:
    return " ".join(f"{_f(axes.px(x))},{_f(axes.py(y))}" for x, y in pts if axes.inside(x, y))


def boundary_path(samples, tip=None) -> list[tuple[float, float]]:
    """Lower edge left to right, then the upper edge back: one closed-looking outline."""
    lower = [(s.L, s.omega_lower) for s in samples if s.omega_lower is not None]
    upper = [(s.L, s.omega_upper) for s in samples if s.omega_upper is not None]
    path = list(lower)
    if tip is not None:
        path.append(tip)
    path.extend(reversed(upper))
    return path


def _star(cx: float, cy: float, r: float = 9.0) -> str:
    pts = []
    for k in range(10):
        rad = r if k % 2 == 0 else r * 0.42
        a = -math.pi / 2 + k * math.pi / 5
        pts.append(f"{_f(cx + rad * math.cos(a))},{_f(cy + rad * math.sin(a))}")
    return " ".join(pts)


def _decade_label(k: int, x: float, y: float, anchor: str) -> str:
    return (f'<text x="{_f(x)}" y="{_f(y)}" text-anchor="{anchor}" font-size="12">'
            f'10<tspan dy="-7" font-size="9">{k}</tspan></text>')


def render_figure(curves: dict, axes: LogAxes, title: str, horizon: float | None = None,
                  witness: tuple[float, float] | None = None, provenance: list[str] = (),
                  note: str | None = None) -> str:
    """``curves`` maps scenario name to a list of (L, Omega) vertices."""
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="Helvetica, Arial, sans-serif">']
    if provenance:
        out.append("<metadata><![CDATA[")
        out.extend(provenance)
        out.append("]]></metadata>")
    out.append(f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>')
    x0, x1 = axes.px(10.0**axes.x_lo), axes.px(10.0**axes.x_hi)
    y0, y1 = axes.py(10.0**axes.y_lo), axes.py(10.0**axes.y_hi)

    out.append('<g stroke="#e3e3e3" stroke-width="0.8">')
    for k in range(axes.x_lo, axes.x_hi + 1):
        x = axes.px(10.0**k)
        out.append(f'<line x1="{_f(x)}" y1="{_f(y1)}" x2="{_f(x)}" y2="{_f(y0)}"/>')
    for k in range(axes.y_lo, axes.y_hi + 1):
        y = axes.py(10.0**k)
        out.append(f'<line x1="{_f(x0)}" y1="{_f(y)}" x2="{_f(x1)}" y2="{_f(y)}"/>')
    out.append("</g>")

    out.append('<g stroke="#000000" stroke-width="1">')
    for k in range(axes.x_lo, axes.x_hi):
        for m in range(2, 10):
            x = axes.px(m * 10.0**k)
            out.append(f'<line x1="{_f(x)}" y1="{_f(y0)}" x2="{_f(x)}" y2="{_f(y0 - 4)}"/>')
    for k in range(axes.y_lo, axes.y_hi):
        for m in range(2, 10):
            y = axes.py(m * 10.0**k)
            out.append(f'<line x1="{_f(x0)}" y1="{_f(y)}" x2="{_f(x0 + 4)}" y2="{_f(y)}"/>')
    out.append("</g>")
    out.append(f'<rect x="{_f(x0)}" y="{_f(y1)}" width="{_f(x1 - x0)}" height="{_f(y0 - y1)}" '
               'fill="none" stroke="#000000" stroke-width="1.2"/>')
    for k in range(axes.x_lo, axes.x_hi + 1):
        out.append(_decade_label(k, axes.px(10.0**k), y0 + 18, "middle"))
    for k in range(axes.y_lo, axes.y_hi + 1):
        out.append(_decade_label(k, x0 - 8, axes.py(10.0**k) + 4, "end"))
    out.append(f'<text x="{_f((x0 + x1) / 2)}" y="{_f(HEIGHT - 18)}" text-anchor="middle" '
               'font-size="14">L / σ</text>')
    out.append(f'<text x="20" y="{_f((y0 + y1) / 2)}" text-anchor="middle" font-size="14" '
               f'transform="rotate(-90 20 {_f((y0 + y1) / 2)})">σΩ</text>')
    out.append(f'<text x="{_f((x0 + x1) / 2)}" y="26" text-anchor="middle" font-size="15">'
               f'{escape(title)}</text>')

    if horizon is not None and math.isfinite(horizon) and axes.inside(horizon, 10.0**axes.y_lo):
        x = axes.px(horizon)
        out.append(f'<line x1="{_f(x)}" y1="{_f(y1)}" x2="{_f(x)}" y2="{_f(y0)}" stroke="#555555" '
                   'stroke-width="1.2" stroke-dasharray="2,3"/>')
        out.append(f'<text x="{_f(x + 4)}" y="{_f(y1 + 14)}" font-size="11" fill="#555555">horizon</text>')

    for name in ("vacuum", "thermal", "desitter"):
        pts = curves.get(name)
        if not pts:
            continue
        style, _ = STYLES[name]
        out.append(f'<polyline id="{name}" fill="none" {style} points="{_points(axes, pts)}"/>')

    if witness is not None and axes.inside(*witness):
        out.append(f'<polygon id="witness" fill="#d62728" stroke="#7a0000" stroke-width="0.8" '
                   f'points="{_star(axes.px(witness[0]), axes.py(witness[1]))}"/>')

    names = [n for n in ("vacuum", "thermal", "desitter") if curves.get(n)]
    ly = y0 - 18 * len(names) - 8
    for name in names:
        style, label = STYLES[name]
        lx = x1 - 190
        out.append(f'<line x1="{_f(lx)}" y1="{_f(ly)}" x2="{_f(lx + 30)}" y2="{_f(ly)}" {style}/>')
        out.append(f'<text x="{_f(lx + 38)}" y="{_f(ly + 4)}" font-size="12">{label}</text>')
        ly += 18
    if note:
        out.append(f'<text x="{_f(x1 - 8)}" y="{_f(y1 + 18)}" text-anchor="end" font-size="12" '
                   f'fill="#b00000">{escape(note)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def axes_for(x_range: tuple[float, float], y_values) -> LogAxes:
    ys = [y for y in y_values if y and y > 0]
    y_lo = math.floor(math.log10(min(ys))) if ys else 0
    y_hi = math.ceil(math.log10(max(ys))) if ys else 4
    x_lo = math.floor(math.log10(x_range[0]) + 1e-9)
    x_hi = math.ceil(math.log10(x_range[1]) - 1e-9)
    return LogAxes(x_lo, max(x_hi, x_lo + 1), y_lo, max(y_hi, y_lo + 1))
