"""Minimal static SVG line charts (no plotting dependency)."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]


def line_chart(series: dict, path, title: str = "", xlabel: str = "", ylabel: str = "",
               logx: bool = False, logy: bool = False, width: int = 640, height: int = 400) -> str:
    """series maps a label to (xs, ys); non-finite points are dropped."""
    fx = (lambda v: math.log10(v)) if logx else (lambda v: v)
    fy = (lambda v: math.log10(v)) if logy else (lambda v: v)
    pts = {}
    for name, (xs, ys) in series.items():
        keep = [(fx(float(a)), fy(float(b))) for a, b in zip(xs, ys)
                if math.isfinite(float(a)) and math.isfinite(float(b))
                and (not logx or float(a) > 0) and (not logy or float(b) > 0)]
        pts[name] = keep
    allp = [p for v in pts.values() for p in v] or [(0.0, 0.0)]
    x0, x1 = min(p[0] for p in allp), max(p[0] for p in allp)
    y0, y1 = min(p[1] for p in allp), max(p[1] for p in allp)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    L, R, T, B = 70, 150, 40, 50
    W, H = width - L - R, height - T - B

    def sx(v):
        return L + (v - x0) / (x1 - x0) * W

    def sy(v):
        return T + H - (v - y0) / (y1 - y0) * H

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'font-family="sans-serif" font-size="12">',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
           f'<rect x="{L}" y="{T}" width="{W}" height="{H}" fill="none" stroke="#444"/>',
           f'<text x="{L + W / 2}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
           f'<text x="{L + W / 2}" y="{height - 12}" text-anchor="middle">{escape(xlabel)}</text>',
           f'<text x="16" y="{T + H / 2}" text-anchor="middle" transform="rotate(-90 16 {T + H / 2})">'
           f'{escape(ylabel)}</text>']
    for k in range(5):
        xv = x0 + (x1 - x0) * k / 4
        yv = y0 + (y1 - y0) * k / 4
        xl = f"1e{xv:.1f}" if logx else f"{xv:.3g}"
        yl = f"1e{yv:.1f}" if logy else f"{yv:.3g}"
        out.append(f'<text x="{sx(xv):.1f}" y="{T + H + 16}" text-anchor="middle">{xl}</text>')
        out.append(f'<text x="{L - 6}" y="{sy(yv) + 4:.1f}" text-anchor="end">{yl}</text>')
    for j, (name, p) in enumerate(pts.items()):
        c = _COLORS[j % len(_COLORS)]
        if p:
            d = " ".join(f"{sx(a):.1f},{sy(b):.1f}" for a, b in p)
            out.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{d}"/>')
            out += [f'<circle cx="{sx(a):.1f}" cy="{sy(b):.1f}" r="2.5" fill="{c}"/>' for a, b in p]
        out.append(f'<text x="{L + W + 10}" y="{T + 16 + 16 * j}" fill="{c}">{escape(str(name))}</text>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
    return path
