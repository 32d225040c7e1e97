"""Minimal static SVG line charts (polylines and text only)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["Series", "line_chart", "nice_ticks"]

_W, _H = 640, 440
_ML, _MR, _MT, _MB = 80, 150, 40, 60


@dataclass
class Series:
    x: np.ndarray
    y: np.ndarray
    label: str
    dashed: bool = False
    color: str = "#000000"


def nice_ticks(lo: float, hi: float, target: int = 6) -> list:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * step:
        ticks.append(round(v, 12))
        v += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.3g}"


def line_chart(series, *, title: str = "", xlabel: str = "", ylabel: str = "",
               logy: bool | None = None) -> str:
    """Render ``series`` as an SVG 1.1 document string.

    ``logy=None`` switches to a log y-axis when the finite data span more
    than two decades.
    """
    xs = np.concatenate([np.asarray(s.x, float) for s in series])
    ys = np.concatenate([np.asarray(s.y, float) for s in series])
    ok = np.isfinite(xs) & np.isfinite(ys)
    if not np.any(ok):
        raise ValueError("no finite data to plot")
    x0, x1 = float(xs[ok].min()), float(xs[ok].max())
    y0, y1 = float(ys[ok].min()), float(ys[ok].max())
    if logy is None:
        logy = y0 > 0 and y1 / y0 > 100
    if logy and y0 <= 0:
        raise ValueError("log axis needs positive data")
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    ty = (lambda v: math.log10(v)) if logy else (lambda v: v)
    Y0, Y1 = ty(y0), ty(y1)
    if Y1 == Y0:
        Y0, Y1 = Y0 - 0.5, Y1 + 0.5
    pad = 0.05 * (Y1 - Y0)
    Y0, Y1 = Y0 - pad, Y1 + pad
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def px(v):
        return _ML + (v - x0) / (x1 - x0) * pw

    def py(v):
        return _MT + ph - (ty(v) - Y0) / (Y1 - Y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="#ffffff"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="#000000"/>',
    ]
    for v in nice_ticks(x0, x1):
        X = px(v)
        out.append(f'<line x1="{X:.2f}" y1="{_MT + ph}" x2="{X:.2f}" y2="{_MT + ph + 5}" stroke="#000000"/>')
        out.append(f'<text x="{X:.2f}" y="{_MT + ph + 18}" font-size="11" text-anchor="middle">{_fmt(v)}</text>')
    if logy:
        yt = [10.0**k for k in range(math.ceil(Y0), math.floor(Y1) + 1)]
    else:
        yt = nice_ticks(Y0, Y1)
    for v in yt:
        Yp = py(v)
        out.append(f'<line x1="{_ML - 5}" y1="{Yp:.2f}" x2="{_ML}" y2="{Yp:.2f}" stroke="#000000"/>')
        out.append(f'<text x="{_ML - 8}" y="{Yp + 4:.2f}" font-size="11" text-anchor="end">{_fmt(v)}</text>')
    for k, s in enumerate(series):
        sx, sy = np.asarray(s.x, float), np.asarray(s.y, float)
        keep = np.isfinite(sx) & np.isfinite(sy)
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(sx[keep], sy[keep]))
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        width = 1.5 if s.dashed else 2.5
        out.append(f'<polyline points="{pts}" fill="none" stroke="{s.color}" stroke-width="{width}"{dash}/>')
        ly = _MT + 20 + 18 * k
        lx = _ML + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 28}" y2="{ly}" stroke="{s.color}" '
                   f'stroke-width="{width}"{dash}/>')
        out.append(f'<text x="{lx + 34}" y="{ly + 4}" font-size="12">{escape(s.label)}</text>')
    if title:
        out.append(f'<text x="{_ML + pw / 2:.2f}" y="{_MT - 14}" font-size="14" text-anchor="middle">'
                   f'{escape(title)}</text>')
    if xlabel:
        out.append(f'<text x="{_ML + pw / 2:.2f}" y="{_H - 16}" font-size="12" text-anchor="middle">'
                   f'{escape(xlabel)}</text>')
    if ylabel:
        cy = _MT + ph / 2
        out.append(f'<text x="18" y="{cy:.2f}" font-size="12" text-anchor="middle" '
                   f'transform="rotate(-90 18 {cy:.2f})">{escape(ylabel + (" (log)" if logy else ""))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
