"""Exact BEP over all bus orders.

``solve_bep`` runs a dynamic program over subsets of colors.  For a set ``B``
of colors placed at the bottom it keeps the lowest achievable height of the
topmost bus; the next color ``c`` goes just above both that bus and every
point of ``B`` inside its span, and is valid only if it stays below every
point of the remaining colors inside its span.  Lower is never worse, so the
minimum per subset decides feasibility.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ._exact import Exact, denominator, exact
from .model import (
    BusLayout,
    Color,
    ColoredPointSet,
    EpsLike,
    Infeasible,
    as_epsilon,
    conflicting_pairs,
    ink,
)
from .order import OrderContext, PlacementGrid

ORACLE_CAP = 8
DP_CAP = 20
_BIG = np.int64(1 << 60)


class OracleCapExceeded(ValueError):
    pass


class InfeasibleOrderError(ValueError):
    def __init__(self, infeasible: Infeasible):
        super().__init__(f"order is infeasible: {infeasible.witness}")
        self.infeasible = infeasible


@dataclass
class DpTable:
    """Lowest top-bus code per subset bitmask (``_BIG`` when the subset cannot be stacked)."""

    grid: PlacementGrid
    colors: Tuple[Color, ...]
    top: np.ndarray
    parent: np.ndarray
    point_levels: Tuple[Exact, ...]
    stats: Dict[str, int] = field(default_factory=dict)

    def mask(self, subset: Iterable[Color]) -> int:
        index = {c: i for i, c in enumerate(self.colors)}
        m = 0
        for c in subset:
            m |= 1 << index[c]
        return m

    def level(self, mask: int) -> Optional[int]:
        """Discrete top level ``h`` in ``0..m``: distinct point heights below the top bus."""
        code = int(self.top[mask])
        if code >= _BIG:
            return None
        if mask == 0:
            return 0
        return bisect_left(self.point_levels, self.grid.decode(code))

    def F(self, h: int, mask: int) -> bool:
        lev = self.level(mask)
        return lev is not None and lev <= h

    def order(self) -> Optional[List[Color]]:
        full = (1 << len(self.colors)) - 1
        if self.top[full] >= _BIG:
            return None
        out = []
        m = full
        while m:
            c = int(self.parent[m])
            out.append(self.colors[c])
            m ^= 1 << c
        return out[::-1]


def _subset_fold(values: np.ndarray, k: int, reducer, empty) -> np.ndarray:
    """``out[mask] = reducer over {values[d] : d in mask}``, built by doubling."""
    out = np.empty(1 << k, dtype=np.int64)
    out[0] = empty
    for b in range(k):
        lo = 1 << b
        out[lo : 2 * lo] = reducer(out[:lo], values[b])
    return out


def dp_table(instance: ColoredPointSet, eps: EpsLike = 0, ctx: Optional[OrderContext] = None) -> DpTable:
    k = instance.k
    if k > DP_CAP:
        raise ValueError(f"subset DP limited to {DP_CAP} colors, instance has {k}")
    ctx = ctx or OrderContext(instance, eps)
    full = (1 << k) - 1
    neg = np.int64(-_BIG)
    # lb[c, d] / ub[c, d]: highest / lowest point code of color d inside span(c)
    lb = np.full((k, k), neg, dtype=np.int64)
    ub = np.full((k, k), _BIG, dtype=np.int64)
    for d in range(k):
        for a in range(ctx.col_ptr[d], ctx.col_ptr[d + 1]):
            q = ctx.col_pts[a]
            x, y = ctx.px[q], ctx.py[q]
            inside = (ctx.xl <= x) & (x <= ctx.xr)
            inside[d] = False
            lb[inside, d] = np.maximum(lb[inside, d], y)
            ub[inside, d] = np.minimum(ub[inside, d], y)
    top = np.full(1 << k, _BIG, dtype=np.int64)
    top[0] = -1  # first bus lands on the floor code 0
    parent = np.full(1 << k, -1, dtype=np.int64)
    masks = np.arange(1 << k, dtype=np.int64)
    popcount = np.zeros(1 << k, dtype=np.int64)
    for b in range(k):
        popcount += (masks >> b) & 1
    layers = [masks[popcount == p] for p in range(k + 1)]
    lower = [_subset_fold(lb[c], k, np.maximum, neg) for c in range(k)]
    upper = [_subset_fold(ub[c], k, np.minimum, _BIG) for c in range(k)]
    transitions = 0
    for p in range(k):
        layer = layers[p]
        layer = layer[top[layer] < _BIG]
        if layer.size == 0:
            break
        for c in range(k):
            bit = 1 << c
            sel = layer[(layer & bit) == 0]
            if sel.size == 0:
                continue
            transitions += int(sel.size)
            t = np.maximum(top[sel] + 1, lower[c][sel] + 1)
            for a in range(ctx.col_ptr[c], ctx.col_ptr[c + 1]):
                lo, hi = ctx.band_lo[a], ctx.band_hi[a]
                if lo < hi:
                    t = np.where((lo < t) & (t < hi), hi, t)
            ok = t < upper[c][full ^ sel ^ bit]
            if not ok.any():
                continue
            new = sel[ok] | bit
            t = t[ok]
            better = t < top[new]
            top[new[better]] = t[better]
            parent[new[better]] = c
    reached = int(np.count_nonzero(top < _BIG))
    levels = tuple(sorted({pt.y for pt in instance.points}))
    return DpTable(
        ctx.grid,
        instance.colors,
        top,
        parent,
        levels,
        {"states_visited": reached, "transitions": transitions},
    )


def solve_bep(instance: ColoredPointSet, eps: EpsLike = 0, method: str = "auto"):
    """Decide BEP (BEP^eps when ``eps > 0``) over all bus orders.

    ``method`` is ``"dp"`` (subset dynamic program), ``"smt"`` (linear real
    arithmetic model handed to z3, for instances beyond the DP's reach) or
    ``"auto"`` (DP up to ``DP_CAP`` colors, SMT above).  Returns a ``BusLayout`` whose
    ``stats`` hold the number of reachable subsets and the chosen order, or an
    ``Infeasible``.
    """
    if method == "auto":
        method = "dp" if instance.k <= DP_CAP else "smt"
    if method == "smt":
        from .smt import solve_bep_smt

        return solve_bep_smt(instance, eps)
    if method != "dp":
        raise ValueError(f"unknown method {method!r}")
    if instance.k == 0:
        return BusLayout({}, instance)
    ctx = OrderContext(instance, eps)
    table = dp_table(instance, eps, ctx)
    order = table.order()
    stats = dict(table.stats)
    if order is None:
        return Infeasible("no bus order admits a planar layout", stats=stats)
    layout = ctx.solve(order)
    if not layout:  # pragma: no cover - the DP and the placement share one rule
        raise AssertionError(f"DP order {order} failed placement: {layout}")
    stats["order"] = order
    return BusLayout(layout.bus_y, instance, stats)


def enumerate_orders_oracle(instance: ColoredPointSet, eps: EpsLike = 0, cap: int = ORACLE_CAP):
    """Try every one of the k! orders; the first feasible one wins."""
    if instance.k > cap:
        raise OracleCapExceeded(f"{instance.k} colors exceed the enumeration cap of {cap}")
    if instance.k == 0:
        return BusLayout({}, instance)
    ctx = OrderContext(instance, eps)
    colors = instance.colors
    for perm in permutations(range(instance.k)):
        bus, fail_pos, _, _ = ctx.place(np.array(perm, dtype=np.int64))
        if fail_pos < 0:
            return BusLayout(
                {colors[c]: ctx.grid.decode(bus[i]) for i, c in enumerate(perm)}, instance
            )
    return Infeasible("no bus order admits a planar layout")


def _order_constraints(instance: ColoredPointSet, order: Sequence[Color]):
    """Linear constraints an order imposes: per-bus open height interval and bus pairs ``(lower, upper)``."""
    rank = {c: i for i, c in enumerate(order)}
    pts = instance.points
    below = {c: None for c in instance.colors}  # bus must be strictly above these heights
    above = {c: None for c in instance.colors}  # and strictly below these
    pairs = set()
    for i, c in conflicting_pairs(instance):
        y = pts[i].y
        d = pts[i].color
        if rank[d] > rank[c]:
            if above[c] is None or y < above[c]:
                above[c] = y
            pairs.add((c, d))
        else:
            if below[c] is None or y > below[c]:
                below[c] = y
            pairs.add((d, c))
    return below, above, pairs


def _ink_domains(instance: ColoredPointSet, grid: PlacementGrid, epsilon, below, above):
    k = instance.k
    u = grid.unit
    labels = sorted({exact(v + j * u) for v in grid.values for j in range(-k, k + 1)})
    labels = [y for y in labels if grid.floor <= y <= grid.values[-1] + 1]
    domains = {}
    for c in instance.colors:
        lo = 0 if below[c] is None else bisect_right(labels, below[c])
        hi = len(labels) if above[c] is None else bisect_left(labels, above[c])
        own = [instance.points[i].y for i in instance.members(c)]
        dom = labels[lo:hi]
        if epsilon > 0:
            dom = [y for y in dom if all(abs(y - q) >= epsilon for q in own)]
        domains[c] = dom
    return domains


def minimize_ink(instance: ColoredPointSet, order: Sequence[Color], eps: EpsLike = 0) -> BusLayout:
    """Ink-minimal layout among those that keep every interacting bus pair in ``order``.

    Buses whose spans are disjoint do not interact, so only the relative order
    of overlapping buses is binding.  Heights are chosen from the placement
    grid (critical heights shifted by up to ``k`` units); there the problem is
    a chain of monotone pairwise constraints with separable convex-free costs,
    solved exactly as a minimum cut.
    """
    import networkx as nx

    ctx = OrderContext(instance, eps)
    probe = ctx.solve(order)
    if not probe:
        raise InfeasibleOrderError(probe)
    grid = ctx.grid
    below, above, pairs = _order_constraints(instance, order)
    domains = _ink_domains(instance, grid, ctx.epsilon, below, above)
    pts = instance.points
    scale = 1
    for y in [p.y for p in pts] + [y for dom in domains.values() for y in dom]:
        d = denominator(y)
        scale = scale * d // gcd(scale, d)

    def cost(c, y):
        return int(sum(abs(y - pts[i].y) for i in instance.members(c)) * scale)

    costs = {c: [cost(c, y) for y in dom] for c, dom in domains.items()}
    inf = sum(sum(v) for v in costs.values()) + 1
    g = nx.DiGraph()
    g.add_node("s")
    g.add_node("t")
    for c, dom in domains.items():
        m = len(dom)
        if m == 0:  # pragma: no cover - the bottommost layout lies on the grid
            raise AssertionError(f"empty height domain for {c!r}")
        prev = "s"
        for i in range(m):
            nxt = (c, i + 1) if i + 1 < m else "t"
            g.add_edge(prev, nxt, capacity=costs[c][i])
            if prev != "s" and nxt != "t":
                g.add_edge(nxt, prev, capacity=inf)
            prev = nxt
    u = grid.unit
    for c, d in pairs:
        # y_d >= y_c + u : "y_c >= dom_c[i]" forces "y_d >= dom_c[i] + u"
        dc, dd = domains[c], domains[d]
        for i, y in enumerate(dc):
            j = bisect_left(dd, y + u)
            if j == 0:
                continue
            src = "s" if i == 0 else (c, i)
            dst = "t" if j == len(dd) else (d, j)
            g.add_edge(src, dst, capacity=inf)
    value, (side, _) = nx.minimum_cut(g, "s", "t")
    heights = {}
    for c, dom in domains.items():
        i = 0
        while (c, i + 1) in side:
            i += 1
        heights[c] = dom[i]
    if value >= inf:  # pragma: no cover - the bottommost layout is a finite cut
        raise AssertionError("ink minimization found no finite cut")
    return BusLayout(heights, instance, {"order": list(order)})


def minimize_ink_global(instance: ColoredPointSet, eps: EpsLike = 0, cap: int = ORACLE_CAP):
    """Least ink over all feasible orders (orders that impose identical constraints are tried once)."""
    if instance.k > cap:
        raise OracleCapExceeded(f"{instance.k} colors exceed the enumeration cap of {cap}")
    if instance.k == 0:
        return BusLayout({}, instance)
    ctx = OrderContext(instance, eps)
    colors = instance.colors
    best = None
    best_ink = None
    seen = set()
    for perm in permutations(range(instance.k)):
        _, fail_pos, _, _ = ctx.place(np.array(perm, dtype=np.int64))
        if fail_pos >= 0:
            continue
        order = [colors[c] for c in perm]
        key = frozenset(_order_constraints(instance, order)[2])
        if key in seen:
            continue
        seen.add(key)
        layout = minimize_ink(instance, order, eps)
        value = ink(instance, layout)
        if best_ink is None or value < best_ink:
            best, best_ink = layout, value
    if best is None:
        return Infeasible("no bus order admits a planar layout")
    return best
