"""Layouts where each bus runs through its topmost or its bottommost point.

Each color gets one Boolean: true puts its bus through the topmost point,
false through the bottommost one.  Planarity only ever fails between two
colors, so trying the four choices for every overlapping pair and forbidding
the bad ones gives a 2-SAT formula equivalent to the layout question.
"""

from __future__ import annotations

from itertools import product
from typing import Dict, List, Tuple

from .model import BusLayout, Color, ColoredPointSet, Infeasible
from .twosat import TwoSatFormula, Unsatisfiable, solve_2sat


def candidates(instance: ColoredPointSet) -> Dict[Color, Tuple]:
    """``(y_top, y_bottom)`` per color."""
    out = {}
    for c in instance.colors:
        ys = [p.y for p in instance.points_of(c)]
        out[c] = (max(ys), min(ys))
    return out


def _inside(instance: ColoredPointSet) -> Dict[Color, Dict[Color, List]]:
    """For every color, the heights of foreign points inside its span, grouped by color."""
    pts = instance.points
    spans = instance.spans()
    out: Dict[Color, Dict[Color, List]] = {}
    for c in instance.colors:
        groups: Dict[Color, List] = {}
        for i in instance.indices_in_x_range(spans[c].x_left, spans[c].x_right):
            if pts[i].color != c:
                groups.setdefault(pts[i].color, []).append(pts[i].y)
        out[c] = groups
    return out


def _bus_hits(yc, ys_d, yd) -> bool:
    """Does a bus at ``yc`` meet a point of ``ys_d`` or its connection to height ``yd``?"""
    for y in ys_d:
        lo, hi = (y, yd) if y <= yd else (yd, y)
        if lo <= yc <= hi:
            return True
    return False


def pair_conflicts(yc_choices, yd_choices, d_in_c, c_in_d) -> List[Tuple[bool, bool]]:
    """Type combinations ``(x_c, x_d)`` under which the two colors cross."""
    bad = []
    for tc, td in product((True, False), repeat=2):
        yc = yc_choices[0] if tc else yc_choices[1]
        yd = yd_choices[0] if td else yd_choices[1]
        overlap = bool(d_in_c) or bool(c_in_d)
        if (overlap and yc == yd) or _bus_hits(yc, d_in_c, yd) or _bus_hits(yd, c_in_d, yc):
            bad.append((tc, td))
    return bad


def build_clauses(instance: ColoredPointSet) -> TwoSatFormula:
    """One variable per color (index + 1); one clause per crossing type combination."""
    cand = candidates(instance)
    inside = _inside(instance)
    var = {c: i + 1 for i, c in enumerate(instance.colors)}
    clauses = []
    for c in instance.colors:
        for d, ys in inside[c].items():
            if var[d] < var[c] and c in inside[d]:
                continue  # pair already handled from the other side
            for tc, td in pair_conflicts(cand[c], cand[d], ys, inside[d].get(c, [])):
                clauses.append((-var[c] if tc else var[c], -var[d] if td else var[d]))
    return TwoSatFormula(instance.k, clauses, [str(c) for c in instance.colors])


def layout_from_assignment(instance: ColoredPointSet, assignment) -> BusLayout:
    cand = candidates(instance)
    return BusLayout(
        {c: cand[c][0] if assignment[i] else cand[c][1] for i, c in enumerate(instance.colors)},
        instance,
    )


def solve_halfbep(instance: ColoredPointSet, formula: TwoSatFormula = None):
    """Half-bus layout from a satisfying assignment, or ``Infeasible`` naming the clashing color."""
    formula = formula if formula is not None else build_clauses(instance)
    result = solve_2sat(formula)
    stats = {"variables": formula.num_vars, "clauses": len(formula)}
    if isinstance(result, Unsatisfiable):
        return Infeasible(
            "type constraints are contradictory",
            witness={"color": instance.colors[result.variable - 1]},
            stats=stats,
        )
    layout = layout_from_assignment(instance, result)
    stats["assignment"] = {str(c): v for c, v in zip(instance.colors, result)}
    return BusLayout(layout.bus_y, instance, stats)
