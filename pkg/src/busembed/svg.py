"""SVG drawing of an instance and its bus layout.

The y-axis points up: all geometry is drawn in instance coordinates inside a
group carrying ``matrix(s 0 0 -s tx ty)``, which scales, flips y and moves
the bounding box into the viewport.  Output depends only on the inputs, so
the same instance and layout always give the same bytes.
"""

from __future__ import annotations

import colorsys
from typing import Dict, List, Optional

from ._exact import decimal_text
from .model import BusLayout, Color, ColoredPointSet, validate_planarity

WARNING = "#ff0000"


def _num(v) -> str:
    text = decimal_text(v)
    return text if len(text) <= 12 else f"{float(v):.6g}"


def palette(colors) -> Dict[Color, str]:
    """Evenly spaced hues in color order."""
    out = {}
    k = max(len(colors), 1)
    for i, c in enumerate(colors):
        r, g, b = colorsys.hsv_to_rgb(i / k, 0.75, 0.8)
        out[c] = "#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255))
    return out


def render_svg(
    instance: ColoredPointSet,
    layout: Optional[BusLayout] = None,
    eps=0,
    width: int = 800,
    height: int = 600,
    margin: int = 20,
    allow_invalid: bool = False,
) -> str:
    """Points as circles, buses as thick segments, connections as thin ones.

    Buses and connections involved in a planarity violation are stroked in
    red; without ``allow_invalid`` such a layout raises ``ValueError``.
    """
    bad = set()
    if layout is not None:
        report = validate_planarity(instance, layout, eps)
        if report and not allow_invalid:
            raise ValueError(f"layout has {len(report)} planarity violations")
        for v in report:
            bad.add(v.color)
            if v.point is not None:
                bad.add(instance.points[v.point].color)
            if v.other_color is not None:
                bad.add(v.other_color)
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        "<!-- y axis points up: geometry group uses matrix(s 0 0 -s tx ty) -->\n"
    )
    if not instance.points:
        return head + "</svg>\n"
    xs = [p.x for p in instance.points]
    ys = [p.y for p in instance.points]
    if layout is not None:
        ys += [layout[c] for c in instance.colors]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    sx = (width - 2 * margin) / float(max(x1 - x0, 1))
    sy = (height - 2 * margin) / float(max(y1 - y0, 1))
    s = min(sx, sy)
    tx = margin - float(x0) * s
    ty = height - margin + float(y0) * s
    lw = 1 / s  # one pixel in instance units
    fill = palette(instance.colors)
    body: List[str] = [f'<g transform="matrix({s:.6g} 0 0 {-s:.6g} {tx:.6g} {ty:.6g})">']
    if layout is not None:
        spans = instance.spans()
        for c in instance.colors:
            stroke = WARNING if c in bad else fill[c]
            y = _num(layout[c])
            body.append(
                f'<line class="bus" x1="{_num(spans[c].x_left)}" y1="{y}" x2="{_num(spans[c].x_right)}" '
                f'y2="{y}" stroke="{stroke}" stroke-width="{3 * lw:.6g}"/>'
            )
        for p in instance.points:
            stroke = WARNING if p.color in bad else fill[p.color]
            body.append(
                f'<line class="connection" x1="{_num(p.x)}" y1="{_num(p.y)}" x2="{_num(p.x)}" '
                f'y2="{_num(layout[p.color])}" stroke="{stroke}" stroke-width="{lw:.6g}"/>'
            )
    for p in instance.points:
        body.append(
            f'<circle class="point" cx="{_num(p.x)}" cy="{_num(p.y)}" r="{3 * lw:.6g}" fill="{fill[p.color]}"/>'
        )
    body.append("</g>")
    return head + "\n".join(body) + "\n</svg>\n"
