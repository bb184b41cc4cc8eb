"""Dependency-free SVG line plots with deterministic byte output.

Coordinates are formatted with fixed precision and nothing time- or
environment-dependent is written, so identical input produces identical
bytes.  Column coverage, not visual polish, is the goal.
"""

import math

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#17becf", "#7f7f7f")

_W, _H = 960, 480
_ML, _MR, _MT, _MB = 70, 160, 30, 50


def _fmt(v: float) -> str:
    return format(float(v), ".3f")


def _ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    step = 10.0 ** math.floor(math.log10(span / max(count - 1, 1)))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if span / (step * mult) <= count - 1:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-12 * span:
        ticks.append(0.0 if abs(v) < 1e-12 * span else v)
        v += step
    return ticks


def line_plot(xs, series, xlabel: str = "t", title: str = "") -> str:
    """SVG document plotting each (name, values) series against ``xs``."""
    if len(xs) == 0 or not series:
        raise ValueError("nothing to plot")
    xlo, xhi = min(xs), max(xs)
    ylo = min(min(ys) for _, ys in series)
    yhi = max(max(ys) for _, ys in series)
    if xhi == xlo:
        xhi = xlo + 1.0
    if yhi == ylo:
        yhi = ylo + 1.0
    pad = 0.05 * (yhi - ylo)
    ylo -= pad
    yhi += pad
    pw = _W - _ML - _MR
    ph = _H - _MT - _MB

    def sx(v):
        return _ML + pw * (v - xlo) / (xhi - xlo)

    def sy(v):
        return _MT + ph * (1.0 - (v - ylo) / (yhi - ylo))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" '
        f'stroke="#333333" stroke-width="1"/>',
    ]
    if title:
        out.append(f'<text x="{_ML}" y="{_MT - 10}" font-family="monospace" '
                   f'font-size="14">{title}</text>')
    for tv in _ticks(xlo, xhi):
        px = sx(tv)
        out.append(f'<line x1="{_fmt(px)}" y1="{_MT + ph}" x2="{_fmt(px)}" '
                   f'y2="{_MT + ph + 5}" stroke="#333333"/>')
        out.append(f'<text x="{_fmt(px)}" y="{_MT + ph + 20}" text-anchor="middle" '
                   f'font-family="monospace" font-size="11">{format(tv, ".6g")}</text>')
    for tv in _ticks(ylo, yhi):
        py = sy(tv)
        out.append(f'<line x1="{_ML - 5}" y1="{_fmt(py)}" x2="{_ML}" '
                   f'y2="{_fmt(py)}" stroke="#333333"/>')
        out.append(f'<text x="{_ML - 8}" y="{_fmt(py + 4)}" text-anchor="end" '
                   f'font-family="monospace" font-size="11">{format(tv, ".6g")}</text>')
    out.append(f'<text x="{_ML + pw // 2}" y="{_H - 12}" text-anchor="middle" '
               f'font-family="monospace" font-size="12">{xlabel}</text>')
    for i, (name, ys) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in zip(xs, ys))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                   f'stroke-width="1.2"/>')
        ly = _MT + 18 + 18 * i
        lx = _ML + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 28}" y="{ly}" font-family="monospace" '
                   f'font-size="12">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
