"""Layouts where every bus lies strictly above (or strictly below) its own points.

Points are swept bottom to top and kept in x order.  A color is closed, and
its bus drawn just above the current level, as soon as all its points are
present and form a contiguous run: nothing foreign is left under the bus.
Closing a color can make its neighbors contiguous, so the check cascades to
the two points around the removed run.  The instance is feasible exactly
when every color gets closed.
"""

from __future__ import annotations

from enum import Enum
from typing import Dict, List

import numpy as np

from . import _kernels
from .model import BusLayout, Color, ColoredPointSet, Infeasible, Point
from .order import PlacementGrid, PointArrays, point_arrays


class BusType(Enum):
    SQCAP = "sqcap"  # strictly above all own points
    SQCUP = "sqcup"  # strictly below all own points
    HALFCAP = "halfcap"  # through the topmost own point
    HALFCUP = "halfcup"  # through the bottommost own point
    CENTER = "center"


def classify(instance: ColoredPointSet, layout: BusLayout, color: Color) -> BusType:
    y = layout[color]
    ys = [p.y for p in instance.points_of(color)]
    hi, lo = max(ys), min(ys)
    if y > hi:
        return BusType.SQCAP
    if y < lo:
        return BusType.SQCUP
    if y == hi:
        return BusType.HALFCAP
    if y == lo:
        return BusType.HALFCUP
    return BusType.CENTER


def _slot_arrays(arrays: PointArrays):
    """Points get distinct x slots; a span covers every slot whose x lies inside it."""
    n = len(arrays.rx)
    order = np.lexsort((np.arange(n), arrays.ry, arrays.rx))
    slot_of = np.empty(n, dtype=np.int64)
    slot_of[order] = np.arange(n, dtype=np.int64)
    xs = arrays.rx[order]
    xl = np.searchsorted(xs, arrays.span_lo, side="left").astype(np.int64)
    xr = (np.searchsorted(xs, arrays.span_hi, side="right") - 1).astype(np.int64)
    return slot_of, xl, xr


def solve_sqcap(instance: ColoredPointSet):
    """Decide whether every bus can sit strictly above all of its own points.

    On success the buses sit as low as possible: a color closed at level ``y``
    gets ``y + s * unit`` where ``s`` is one more than the largest stacking
    index of colors closed at the same level inside its span.  ``stats`` count
    insertions and removals (each point at most once).
    """
    n, k = instance.n, instance.k
    if k == 0:
        return BusLayout({}, instance)
    grid = PlacementGrid.for_instance(instance, 0)
    arrays = point_arrays(instance)
    slot_of, xl, xr = _slot_arrays(arrays)
    codes = grid.codes([p.y for p in instance.points])
    by_y = np.argsort(codes, kind="stable")
    order_y = slot_of[by_y]
    level_of = codes[by_y]
    pos_color = np.empty(n, dtype=np.int64)
    pos_color[slot_of] = arrays.cid
    col_slots = slot_of[np.argsort(arrays.cid, kind="stable")]
    closed, sidx, removals, active = _kernels.sweep_sqcap(
        order_y,
        level_of,
        pos_color,
        arrays.ptr,
        col_slots,
        xl,
        xr,
        1,
    )
    stats = {"insertions": n, "removals": int(removals)}
    if active:
        residue = [c for i, c in enumerate(instance.colors) if closed[i] < 0]
        return Infeasible(
            "sweep ends with points that never form contiguous runs",
            witness={"residue": residue},
            stats=stats,
        )
    heights = grid.decode_many(np.asarray(closed, dtype=np.int64) + np.asarray(sidx, dtype=np.int64))
    buses = dict(zip(instance.colors, heights))
    return BusLayout(buses, instance, stats)


def reflect(instance: ColoredPointSet) -> ColoredPointSet:
    return instance.with_points(Point(p.x, -p.y, p.color) for p in instance.points)


def solve_sqcup(instance: ColoredPointSet):
    """Mirror image of ``solve_sqcap``: every bus strictly below its own points."""
    res = solve_sqcap(reflect(instance))
    if not res:
        return res
    return BusLayout({c: -y for c, y in res.bus_y.items()}, instance, res.stats)
