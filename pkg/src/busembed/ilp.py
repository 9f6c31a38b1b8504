"""Ink-minimizing mixed integer model of BEP, written in CPLEX LP format.

Variables: one height ``y_<color>`` per bus, one slack ``e_<i>`` per point
(``e_i >= |y(color of i) - y_i|``) and two binaries per conflicting pair
``(p, c)``, one for each of the disjunctions

    y_p < y_c  or  y_f(p) > y_c        and        y_p > y_c  or  y_f(p) < y_c

which together say that bus ``c`` passes neither through point ``p`` nor
through its connection.  Strict inequalities carry a margin ``delta``.

Counting: absolute values take two rows plus the bound ``e_i >= 0`` per
point, each pair takes four big-M rows plus its two binary declarations, and
each bus has one range bound.  The model therefore has ``n + k + 2|J|``
variables and ``3n + k + 6|J|`` constraints.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ._exact import Exact, decimal_text, exact
from .model import Color, ColoredPointSet, conflicting_pairs
from .order import PlacementGrid


@dataclass(frozen=True)
class Row:
    name: str
    coefs: Tuple[Tuple[str, Exact], ...]
    sense: str  # "<=" or ">="
    rhs: Exact


@dataclass
class IlpModel:
    objective: List[str]
    rows: List[Row]
    bounds: Dict[str, Tuple[Optional[Exact], Optional[Exact]]]
    binaries: List[str]
    bus_var: Dict[Color, str]
    point_var: List[str]
    pairs: List[Tuple[int, Color]]
    big_m: Exact
    delta: Exact
    header: List[str] = field(default_factory=list)

    @property
    def num_variables(self) -> int:
        return len(self.bus_var) + len(self.point_var) + len(self.binaries)

    @property
    def num_constraints(self) -> int:
        return len(self.rows) + len(self.bounds) + len(self.binaries)


def _names(colors: Sequence[Color]) -> Dict[Color, str]:
    out: Dict[Color, str] = {}
    used = set()
    for i, c in enumerate(colors):
        base = "y_" + re.sub(r"[^A-Za-z0-9_]", "_", str(c))
        name = base if base != "y_" and base not in used else f"{base}_{i}"
        used.add(name)
        out[c] = name
    return out


def build_model(instance: ColoredPointSet) -> IlpModel:
    pts = instance.points
    ys = [p.y for p in pts] or [0]
    lo, hi = min(ys) - 1, max(ys) + 1
    big_m = exact(hi - lo + 1)
    delta = PlacementGrid.for_instance(instance, 0).unit
    bus_var = _names(instance.colors)
    point_var = [f"e_{i}" for i in range(len(pts))]
    rows: List[Row] = []
    bounds: Dict[str, Tuple] = {}
    for i, p in enumerate(pts):
        y, e = bus_var[p.color], point_var[i]
        rows.append(Row(f"abs_up_{i}", ((e, 1), (y, -1)), ">=", -p.y))
        rows.append(Row(f"abs_dn_{i}", ((e, 1), (y, 1)), ">=", p.y))
        bounds[e] = (0, None)
    for c in instance.colors:
        bounds[bus_var[c]] = (lo, hi)
    pairs = sorted(conflicting_pairs(instance).pairs, key=lambda pc: (pc[0], instance.colors.index(pc[1])))
    binaries = []
    for j, (i, c) in enumerate(pairs):
        yc, yd, yp = bus_var[c], bus_var[pts[i].color], pts[i].y
        b1, b2 = f"b_{j}_1", f"b_{j}_2"
        binaries += [b1, b2]
        # b1 = 0: point below the bus; b1 = 1: the point's own bus above it
        rows.append(Row(f"p{j}_below", ((yc, -1), (b1, -big_m)), "<=", -delta - yp))
        rows.append(Row(f"p{j}_busabove", ((yc, 1), (yd, -1), (b1, big_m)), "<=", big_m - delta))
        # b2 = 0: point above the bus; b2 = 1: the point's own bus below it
        rows.append(Row(f"p{j}_above", ((yc, 1), (b2, -big_m)), "<=", yp - delta))
        rows.append(Row(f"p{j}_busbelow", ((yd, 1), (yc, -1), (b2, big_m)), "<=", big_m - delta))
    header = [
        "bus embedding model: minimize total connection length",
        f"n = {len(pts)}, k = {instance.k}, conflicting pairs = {len(pairs)}",
        f"margin delta = {decimal_text(delta)}, big-M = {decimal_text(big_m)}",
        "pair j = (point p, bus c), d = color of p:",
        "  b_j_1 = 0 forces y_c >= y_p + delta, b_j_1 = 1 forces y_d >= y_c + delta",
        "  b_j_2 = 0 forces y_c <= y_p - delta, b_j_2 = 1 forces y_d <= y_c - delta",
        "pairs: " + ", ".join(f"{j}=({i},{bus_var[c]})" for j, (i, c) in enumerate(pairs)),
    ]
    return IlpModel(list(point_var), rows, bounds, binaries, bus_var, point_var, pairs, big_m, delta, header)


def _term(coef: Exact, var: str, first: bool) -> str:
    sign = "-" if coef < 0 else ("" if first else "+")
    mag = abs(coef)
    body = var if mag == 1 else f"{decimal_text(mag)} {var}"
    return f"{sign} {body}" if sign else body


def write_lp(model: IlpModel) -> str:
    out = [f"\\ {line}" for line in model.header]
    out.append("Minimize")
    obj = " ".join(_term(1, v, i == 0) for i, v in enumerate(model.objective)) or "0 " + next(iter(model.bus_var.values()), "x")
    out.append(f" ink: {obj}")
    out.append("Subject To")
    for r in model.rows:
        lhs = " ".join(_term(c, v, i == 0) for i, (v, c) in enumerate(r.coefs))
        out.append(f" {r.name}: {lhs} {r.sense} {decimal_text(r.rhs)}")
    out.append("Bounds")
    for var, (lo, hi) in model.bounds.items():
        if hi is None:
            out.append(f" {var} >= {decimal_text(lo)}")
        else:
            out.append(f" {decimal_text(lo)} <= {var} <= {decimal_text(hi)}")
    if model.binaries:
        out.append("Binaries")
        out.extend(f" {b}" for b in model.binaries)
    out.append("End")
    return "\n".join(out) + "\n"


def row_holds(row: Row, values: Mapping[str, Exact]) -> bool:
    lhs = sum(c * values[v] for v, c in row.coefs)
    return lhs <= row.rhs if row.sense == "<=" else lhs >= row.rhs


def assignment_satisfies(model: IlpModel, instance: ColoredPointSet, heights: Mapping[Color, Exact]) -> bool:
    """Whether bus heights extend to a feasible point of the model (slacks and binaries chosen)."""
    values: Dict[str, Exact] = {model.bus_var[c]: exact(y) for c, y in heights.items()}
    for var, (lo, hi) in model.bounds.items():
        if var in values and not (lo <= values[var] <= hi):
            return False
    for i, p in enumerate(instance.points):
        values[model.point_var[i]] = abs(values[model.bus_var[p.color]] - p.y)
    by_pair: Dict[int, List[Row]] = {}
    for r in model.rows:
        if r.name.startswith("abs_"):
            if not row_holds(r, values):
                return False
        else:
            by_pair.setdefault(int(r.name[1:].split("_")[0]), []).append(r)
    for j, rows in by_pair.items():
        ok = False
        for b1, b2 in product((0, 1), repeat=2):
            values[f"b_{j}_1"], values[f"b_{j}_2"] = b1, b2
            if all(row_holds(r, values) for r in rows):
                ok = True
                break
        if not ok:
            return False
    return True


def objective_value(model: IlpModel, instance: ColoredPointSet, heights: Mapping[Color, Exact]) -> Exact:
    return exact(sum(abs(heights[p.color] - p.y) for p in instance.points))
