"""Minimal SVG line plots for sweep results (polyline, axes, optional log scale)."""
from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

_W, _H = 640, 260
_ML, _MR, _MT, _MB = 70, 20, 28, 40


def _scale(values: Sequence[float], log: bool):
    vals = [math.log10(v) for v in values if v > 0] if log else list(values)
    if not vals:
        return None
    lo, hi = min(vals), max(vals)
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def _fmt(v: float, log: bool) -> str:
    return f"1e{v:.0f}" if log else f"{v:.3g}"


def panel(xs, ys, *, title: str, y_top: float, x_log: bool, y_log: bool) -> list[str]:
    out = []
    x_rng, y_rng = _scale(xs, x_log), _scale(ys, y_log)
    left, right = _ML, _W - _MR
    top, bottom = y_top + _MT, y_top + _H - _MB
    out.append(f'<text x="{left}" y="{y_top + 18}" font-size="13">{escape(title)}</text>')
    out.append(f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>')
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>')
    if x_rng is None or y_rng is None:
        return out
    for (lo, hi), horizontal in ((x_rng, True), (y_rng, False)):
        log = x_log if horizontal else y_log
        for frac in (0.0, 0.5, 1.0):
            v = lo + frac * (hi - lo)
            if horizontal:
                px = left + frac * (right - left)
                out.append(f'<text x="{px:.1f}" y="{bottom + 16}" font-size="10" text-anchor="middle">{_fmt(v, log)}</text>')
            else:
                py = bottom - frac * (bottom - top)
                out.append(f'<text x="{left - 6}" y="{py + 3:.1f}" font-size="10" text-anchor="end">{_fmt(v, log)}</text>')
    pts = []
    for x, y in zip(xs, ys):
        if (x_log and x <= 0) or (y_log and y <= 0):
            continue
        xv = math.log10(x) if x_log else x
        yv = math.log10(y) if y_log else y
        px = left + (xv - x_rng[0]) / (x_rng[1] - x_rng[0]) * (right - left)
        py = bottom - (yv - y_rng[0]) / (y_rng[1] - y_rng[0]) * (bottom - top)
        pts.append(f"{px:.2f},{py:.2f}")
    out.append(f'<polyline fill="none" stroke="#1f4e9c" stroke-width="1.2" points="{" ".join(pts)}"/>')
    return out


def sweep_svg(rows, cfg) -> str:
    """Two stacked panels: ratio (log y) and concurrence, against the sweep variable."""
    from .sweep import TempSweep

    temp = isinstance(cfg.sweep, TempSweep)
    if temp:
        xs = [1.0 / r.sweep_value for r in rows]
        x_label, x_log = "T", False
    else:
        xs = [r.sweep_value for r in rows]
        x_label, x_log = "Omega", cfg.sweep.log_spaced
    body = ['<rect width="100%" height="100%" fill="white"/>']
    body += panel(xs, [r.ratio for r in rows], title=f"abs/unruh ratio vs {x_label}", y_top=0, x_log=x_log, y_log=True)
    body += panel(xs, [r.concurrence for r in rows], title=f"concurrence vs {x_label}", y_top=_H, x_log=x_log, y_log=False)
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{2 * _H}" viewBox="0 0 {_W} {2 * _H}">'
    return "\n".join([head, *body, "</svg>"]) + "\n"
