"""Dependency-free SVG heatmaps with a blue-green-red ramp and a numeric legend."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence
from xml.sax.saxutils import escape

import numpy as np


@dataclass(frozen=True)
class ColorScale:
    stops: tuple[tuple[int, int, int], ...] = ((0, 0, 255), (0, 200, 0), (255, 0, 0))
    vmin: Optional[float] = None  # default: data minimum
    vmax: Optional[float] = None  # default: white_above if given, else data maximum

    def as_dict(self) -> dict:
        return {"stops": [list(s) for s in self.stops], "vmin": self.vmin, "vmax": self.vmax}


def _color(t: float, stops) -> str:
    t = min(max(t, 0.0), 1.0)
    pos = t * (len(stops) - 1)
    k = min(int(pos), len(stops) - 2)
    f = pos - k
    rgb = [round(a + (b - a) * f) for a, b in zip(stops[k], stops[k + 1])]
    return "#%02x%02x%02x" % tuple(rgb)


def _num(x: float) -> str:
    return f"{x:.4g}"


def render_heatmap(
    matrix,
    row_labels: Sequence[str],
    col_labels: Sequence[str],
    scale: ColorScale = ColorScale(),
    white_above: Optional[float] = None,
    title: str = "",
    cell: float = 4.0,
    max_ticks: int = 25,
) -> str:
    """One rect per cell; row 0 is drawn at the bottom so time runs upward.

    Values are mapped linearly over [vmin, vmax]; cells strictly above
    `white_above` are drawn white.
    """
    values = np.asarray(matrix, dtype=np.float64)
    if values.ndim != 2 or values.size == 0:
        raise ValueError("heatmap needs a non-empty 2-d matrix")
    if not np.all(np.isfinite(values)):
        raise ValueError("heatmap values must be finite")
    nrows, ncols = values.shape
    if len(row_labels) != nrows or len(col_labels) != ncols:
        raise ValueError("label counts do not match matrix shape")

    vmin = float(values.min()) if scale.vmin is None else scale.vmin
    if scale.vmax is not None:
        vmax = scale.vmax
    elif white_above is not None:
        vmax = white_above
    else:
        vmax = float(values.max())
    span = vmax - vmin if vmax > vmin else 1.0

    left, bottom, top, legend_w = 90.0, 70.0, 30.0, 90.0
    width = left + ncols * cell + legend_w
    height = top + nrows * cell + bottom
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(width)}" '
        f'height="{_num(height)}" font-family="sans-serif" font-size="9">',
    ]
    if title:
        out.append(f'<text x="{_num(left)}" y="18" font-size="12">{escape(title)}</text>')
    out.append('<g shape-rendering="crispEdges">')
    for r in range(nrows):
        y = top + (nrows - 1 - r) * cell
        for c in range(ncols):
            v = values[r, c]
            fill = "#ffffff" if white_above is not None and v > white_above else _color(
                (v - vmin) / span, scale.stops
            )
            out.append(
                f'<rect x="{_num(left + c * cell)}" y="{_num(y)}" width="{_num(cell)}" '
                f'height="{_num(cell)}" fill="{fill}"/>'
            )
    out.append("</g>")

    row_step = max(1, math.ceil(nrows / max_ticks))
    for r in range(0, nrows, row_step):
        y = top + (nrows - 1 - r) * cell + cell / 2 + 3
        out.append(
            f'<text x="{_num(left - 4)}" y="{_num(y)}" text-anchor="end">{escape(str(row_labels[r]))}</text>'
        )
    col_step = max(1, math.ceil(ncols / max_ticks))
    base = top + nrows * cell + 8
    for c in range(0, ncols, col_step):
        x = left + c * cell + cell / 2
        out.append(
            f'<text x="{_num(x)}" y="{_num(base)}" text-anchor="end" '
            f'transform="rotate(-60 {_num(x)} {_num(base)})">{escape(str(col_labels[c]))}</text>'
        )

    lx = left + ncols * cell + 20
    lh = nrows * cell
    steps = 50
    for k in range(steps):
        y = top + lh - (k + 1) * lh / steps
        out.append(
            f'<rect x="{_num(lx)}" y="{_num(y)}" width="14" height="{_num(lh / steps)}" '
            f'fill="{_color((k + 0.5) / steps, scale.stops)}"/>'
        )
    for k in range(5):
        frac = k / 4
        y = top + lh - frac * lh + 3
        out.append(f'<text x="{_num(lx + 18)}" y="{_num(y)}">{_num(vmin + frac * span)}</text>')
    if white_above is not None:
        out.append(
            f'<rect x="{_num(lx)}" y="{_num(top - 16)}" width="14" height="10" fill="#ffffff" stroke="#000"/>'
        )
        out.append(f'<text x="{_num(lx + 18)}" y="{_num(top - 8)}">&gt; {_num(white_above)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
