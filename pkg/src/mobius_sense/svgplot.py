"""Minimal deterministic SVG scatter plots with optional log axes."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 440
LEFT, RIGHT, TOP, BOTTOM = 80, 20, 40, 60


def _num(v: float) -> str:
    return f"{v:.2f}"


class _Axis:
    def __init__(self, values, log: bool, lo_px: float, hi_px: float):
        self.log = log
        vals = [self._t(v) for v in values]
        vals = [v for v in vals if math.isfinite(v)]
        if not vals:
            lo, hi = (0.0, 1.0)
        else:
            lo, hi = min(vals), max(vals)
        if log:
            lo, hi = math.floor(lo), math.ceil(hi)
            if hi == lo:
                hi = lo + 1
        else:
            if hi == lo:
                lo, hi = lo - 0.5, hi + 0.5
            pad = 0.05 * (hi - lo)
            lo, hi = lo - pad, hi + pad
        self.lo, self.hi = lo, hi
        self.lo_px, self.hi_px = lo_px, hi_px

    def _t(self, v: float) -> float:
        if self.log:
            return math.log10(v) if v > 0 else math.nan
        return v

    def px(self, v: float) -> float:
        t = self._t(v)
        return self.lo_px + (t - self.lo) / (self.hi - self.lo) * (self.hi_px - self.lo_px)

    def ticks(self):
        if self.log:
            step = max(1, math.ceil((self.hi - self.lo) / 10))
            e = int(self.lo)
            while e <= self.hi:
                yield 10.0**e, f"1e{e}"
                e += step
        else:
            lo, hi = math.ceil(self.lo), math.floor(self.hi)
            step = max(1, math.ceil((hi - lo + 1) / 10))
            for v in range(lo, hi + 1, step):
                yield float(v), str(v)


def scatter_svg(points, bounds=(), *, xlog=False, ylog=True, title="", xlabel="",
                ylabel="", bound_line=False) -> str:
    """Scatter ``points`` (filled markers) and ``bounds`` (open markers) as SVG text.

    Points with non-finite or, on log axes, non-positive coordinates are skipped.
    """
    def keep(p):
        x, y = p
        if not (math.isfinite(x) and math.isfinite(y)):
            return False
        return (x > 0 or not xlog) and (y > 0 or not ylog)

    points = [p for p in points if keep(p)]
    bounds = [p for p in bounds if keep(p)]
    both = points + bounds
    xa = _Axis([p[0] for p in both], xlog, LEFT, WIDTH - RIGHT)
    ya = _Axis([p[1] for p in both], ylog, HEIGHT - BOTTOM, TOP)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-size="15">{escape(title)}</text>',
    ]
    x0, x1 = LEFT, WIDTH - RIGHT
    y0, y1 = HEIGHT - BOTTOM, TOP
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')
    for v, lab in xa.ticks():
        px = _num(xa.px(v))
        out.append(f'<line x1="{px}" y1="{y0}" x2="{px}" y2="{y0 + 5}" stroke="black"/>')
        out.append(f'<text x="{px}" y="{y0 + 20}" text-anchor="middle" font-size="11">{lab}</text>')
    for v, lab in ya.ticks():
        py = _num(ya.px(v))
        out.append(f'<line x1="{x0 - 5}" y1="{py}" x2="{x0}" y2="{py}" stroke="black"/>')
        out.append(f'<text x="{x0 - 8}" y="{py}" text-anchor="end" font-size="11" '
                   f'dominant-baseline="middle">{lab}</text>')
    out.append(f'<text x="{(x0 + x1) / 2}" y="{HEIGHT - 15}" text-anchor="middle" '
               f'font-size="13">{escape(xlabel)}</text>')
    out.append(f'<text x="18" y="{(y0 + y1) / 2}" text-anchor="middle" font-size="13" '
               f'transform="rotate(-90 18 {(y0 + y1) / 2})">{escape(ylabel)}</text>')

    if bounds and bound_line:
        uniq = sorted(set(bounds))
        path = " ".join(f"{_num(xa.px(x))},{_num(ya.px(y))}" for x, y in uniq)
        out.append(f'<polyline points="{path}" fill="none" stroke="red" stroke-width="1"/>')
    for x, y in bounds:
        out.append(f'<circle cx="{_num(xa.px(x))}" cy="{_num(ya.px(y))}" r="4" fill="none" '
                   f'stroke="red"/>')
    for x, y in points:
        out.append(f'<circle cx="{_num(xa.px(x))}" cy="{_num(ya.px(y))}" r="2" fill="blue"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
