"""Feasibility and bottommost placement for a prescribed bottom-to-top bus order.

Bus heights live on a discrete grid.  Every height the solvers produce has the
form ``v + j * unit`` where ``v`` is a *critical value* (a point height, a
point height shifted by +-eps, or the floor below everything) and
``0 <= j <= k``.  The unit is small enough that ``k * unit`` never reaches the
next critical value, so heights can be handled as integer codes
``index(v) * mult + j`` and compared exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from ._exact import Exact, exact
from .model import BusLayout, Color, ColoredPointSet, EpsLike, Infeasible, as_epsilon


def exact_ranks(values: Sequence) -> Tuple[np.ndarray, list]:
    """Dense ranks of exact values (equal values share a rank) and the sorted distinct values."""
    if values and all(type(v) is int for v in values):
        try:
            arr = np.array(values, dtype=np.int64)
        except OverflowError:
            arr = None
        if arr is not None:
            distinct, inv = np.unique(arr, return_inverse=True)
            return inv.astype(np.int64).reshape(-1), [int(v) for v in distinct]
    distinct = sorted(set(values))
    pos = {v: i for i, v in enumerate(distinct)}
    return np.fromiter((pos[v] for v in values), np.int64, len(values)), distinct


@dataclass(frozen=True)
class PointArrays:
    """Integer views of an instance: coordinate ranks, color ids and span ends (as x ranks)."""

    rx: np.ndarray
    ry: np.ndarray
    cid: np.ndarray
    ptr: np.ndarray  # points of color c are members[ptr[c]:ptr[c+1]] in any grouping by color
    span_lo: np.ndarray
    span_hi: np.ndarray


def point_arrays(instance: ColoredPointSet) -> PointArrays:
    pts = instance.points
    n, k = len(pts), instance.k
    rx, _ = exact_ranks([p.x for p in pts])
    ry, _ = exact_ranks([p.y for p in pts])
    index = {c: i for i, c in enumerate(instance.colors)}
    cid = np.fromiter((index[p.color] for p in pts), np.int64, n)
    counts = np.bincount(cid, minlength=k)
    ptr = np.zeros(k + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    if n:
        grouped = rx[np.argsort(cid, kind="stable")]
        span_lo = np.minimum.reduceat(grouped, ptr[:-1]).astype(np.int64)
        span_hi = np.maximum.reduceat(grouped, ptr[:-1]).astype(np.int64)
    else:
        span_lo = span_hi = np.zeros(k, dtype=np.int64)
    return PointArrays(rx, ry, cid, ptr, span_lo, span_hi)


@dataclass(frozen=True)
class PlacementGrid:
    """Critical heights plus the separation unit used above them."""

    values: Tuple[Exact, ...]
    unit: Exact
    mult: int

    def __post_init__(self):
        ints = None
        if all(type(v) is int for v in self.values):
            try:
                ints = np.array(self.values, dtype=np.int64)
            except OverflowError:
                pass
        object.__setattr__(self, "_ints", ints)

    @property
    def _pos(self) -> Dict[Exact, int]:
        pos = self.__dict__.get("_pos_cache")
        if pos is None:
            pos = {v: i for i, v in enumerate(self.values)}
            object.__setattr__(self, "_pos_cache", pos)
        return pos

    @classmethod
    def for_instance(cls, instance: ColoredPointSet, eps: EpsLike = 0) -> "PlacementGrid":
        epsilon = as_epsilon(eps)
        ys = [p.y for p in instance.points]
        if epsilon > 0:
            ys = ys + [y + epsilon for y in ys] + [y - epsilon for y in ys]
        _, crit = exact_ranks(ys)
        if not crit:
            crit = [0]
        values = tuple([crit[0] - 1] + crit)
        if all(type(v) is int for v in values) and abs(values[0]) < 2**62 and abs(values[-1]) < 2**62:
            gap = int(np.diff(np.array(values, dtype=np.int64)).min())
        else:
            gap = min(b - a for a, b in zip(values, values[1:]))
        k = max(instance.k, 1)
        unit: Exact = 1
        while unit * (k + 1) > gap:
            unit = Fraction(unit) / 10
        return cls(values, exact(unit), k + 2)

    @property
    def floor(self) -> Exact:
        return self.values[0]

    def index(self, value) -> int:
        try:
            return self._pos[value]
        except KeyError:
            raise KeyError(f"{value} is not a critical value") from None

    def code(self, value) -> int:
        return self._pos[value] * self.mult

    def codes(self, values: Sequence) -> np.ndarray:
        if self._ints is not None and all(type(v) is int for v in values):
            arr = np.array(values, dtype=np.int64)
            idx = np.searchsorted(self._ints, arr)
            if len(arr) and (idx.max() >= len(self._ints) or (self._ints[idx] != arr).any()):
                raise KeyError("value is not a critical value")
            return idx * self.mult
        pos = self._pos
        return np.fromiter((pos[v] for v in values), np.int64, len(values)) * self.mult

    def decode(self, code: int) -> Exact:
        level, j = divmod(int(code), self.mult)
        return exact(self.values[level] + j * self.unit)

    def decode_many(self, codes) -> List[Exact]:
        """``decode`` for a whole array, over one common denominator."""
        codes = np.asarray(codes, dtype=np.int64)
        den, vnum, unum = self._scaled()
        level, j = np.divmod(codes, self.mult)
        if isinstance(vnum, np.ndarray):
            nums = (vnum[level] + j * unum).tolist()
        else:
            nums = [vnum[a] + b * unum for a, b in zip(level.tolist(), j.tolist())]
        if den == 1:
            return nums
        return [n // den if n % den == 0 else Fraction(n, den) for n in nums]

    def _scaled(self):
        # critical values and unit as integers over a common denominator
        cached = self.__dict__.get("_scaled_cache")
        if cached is None:
            den = lcm(self.unit.denominator, *(v.denominator for v in self.values))
            vnum = [v.numerator * (den // v.denominator) for v in self.values]
            unum = self.unit.numerator * (den // self.unit.denominator)
            bound = max(abs(vnum[0]), abs(vnum[-1])) + unum * self.mult
            if bound < 2**62:
                vnum = np.array(vnum, dtype=np.int64)
            cached = (den, vnum, unum)
            object.__setattr__(self, "_scaled_cache", cached)
        return cached


class OrderContext:
    """Integer arrays of an instance prepared once and reused for many orders."""

    def __init__(self, instance: ColoredPointSet, eps: EpsLike = 0):
        self.instance = instance
        self.epsilon = as_epsilon(eps)
        self.grid = grid = PlacementGrid.for_instance(instance, self.epsilon)
        colors = instance.colors
        self.color_index = {c: i for i, c in enumerate(instance.colors)}
        arrays = point_arrays(instance)
        self.nx = max(int(arrays.rx.max()) + 1, 1) if instance.n else 1
        self.px = arrays.rx
        ys = [p.y for p in instance.points]
        self.py = grid.codes(ys)
        # members of each color, lowest point first
        col_pts = np.lexsort((arrays.ry, arrays.cid)).astype(np.int64)
        self.col_ptr = arrays.ptr
        self.col_pts = col_pts
        e = self.epsilon
        if e > 0:
            sel = [ys[i] for i in col_pts]
            self.band_lo = grid.codes([y - e for y in sel])
            self.band_hi = grid.codes([y + e for y in sel])
        else:
            self.band_lo = np.zeros(len(col_pts), dtype=np.int64)
            self.band_hi = np.zeros(len(col_pts), dtype=np.int64)
        self.xl = arrays.span_lo
        self.xr = arrays.span_hi

    def place(self, order_idx: np.ndarray):
        return _kernels.place_in_order(
            order_idx,
            self.col_ptr,
            self.col_pts,
            self.px,
            self.py,
            self.band_lo,
            self.band_hi,
            self.xl,
            self.xr,
            self.nx,
            0,
        )

    def order_indices(self, order: Sequence[Color]) -> np.ndarray:
        colors = self.instance.colors
        if len(order) != len(colors) or set(order) != set(colors):
            raise ValueError(
                f"order must be a permutation of the colors {list(colors)!r}, got {list(order)!r}"
            )
        return np.array([self.color_index[c] for c in order], dtype=np.int64)

    def solve(self, order: Sequence[Color]):
        order = list(order)
        bus, fail_pos, fail_point, blocker = self.place(self.order_indices(order))
        if fail_pos >= 0:
            return Infeasible(
                "connection crosses a lower bus",
                witness={
                    "point": int(fail_point),
                    "color": order[fail_pos],
                    "blocking_color": order[blocker],
                },
            )
        heights = self.grid.decode_many(bus[: len(order)])
        return BusLayout(dict(zip(order, heights)), self.instance)


def solve_with_order(
    instance: ColoredPointSet, order: Sequence[Color], eps: EpsLike = 0
) -> "BusLayout | Infeasible":
    """Place the buses bottom to top in ``order``, each at its lowest valid height.

    Only buses with overlapping spans are bound by the order.  Returns the
    layout, or an ``Infeasible`` whose witness names the first point whose
    connection must cross an already placed bus.
    """
    return OrderContext(instance, eps).solve(order)


class RangeMaxTree:
    """Segment tree over x slots holding the highest processed point height."""

    def __init__(self, size: int):
        self.size = 1
        while self.size < max(size, 1):
            self.size *= 2
        self.tree: List[Optional[Exact]] = [None] * (2 * self.size)

    def insert(self, slot: int, y) -> None:
        p = slot + self.size
        if self.tree[p] is not None and self.tree[p] >= y:
            return
        self.tree[p] = y
        p >>= 1
        while p:
            a, b = self.tree[2 * p], self.tree[2 * p + 1]
            self.tree[p] = b if a is None or (b is not None and b > a) else a
            p >>= 1

    def query(self, lo: int, hi: int) -> Optional[Exact]:
        """Maximum over slots ``lo..hi`` inclusive, ``None`` if nothing was inserted there."""
        res = None
        lo += self.size
        hi += self.size + 1
        while lo < hi:
            if lo & 1:
                v = self.tree[lo]
                if v is not None and (res is None or v > res):
                    res = v
                lo += 1
            if hi & 1:
                hi -= 1
                v = self.tree[hi]
                if v is not None and (res is None or v > res):
                    res = v
            lo >>= 1
            hi >>= 1
        return res


def lowest_feasible_y(
    processed: RangeMaxTree,
    span_slots: Tuple[int, int],
    floor,
    unit,
    eps: EpsLike = 0,
    own_ys: Sequence = (),
) -> Exact:
    """Lowest height not below ``floor`` that clears every processed point in the span.

    The result is then pushed past the open bands ``(y - eps, y + eps)`` around
    the color's own points.
    """
    t = exact(floor)
    top = processed.query(*span_slots)
    if top is not None and top + unit > t:
        t = exact(top + unit)
    epsilon = as_epsilon(eps)
    if epsilon > 0:
        for y in sorted(own_ys):
            if y - epsilon < t < y + epsilon:
                t = exact(y + epsilon)
    return t


def is_bottommost(instance: ColoredPointSet, layout: BusLayout, order: Sequence[Color], eps: EpsLike = 0) -> Dict[Color, bool]:
    """For each bus, whether lowering it by one grid unit breaks the layout or the order."""
    from .model import validate_planarity

    grid = PlacementGrid.for_instance(instance, eps)
    spans = instance.spans()
    out = {}
    for i, c in enumerate(order):
        lowered = dict(layout.bus_y)
        lowered[c] = layout[c] - grid.unit
        below_lower = any(
            lowered[c] <= layout[d] for d in order[:i] if spans[d].overlaps(spans[c])
        )
        out[c] = (
            lowered[c] < grid.floor
            or below_lower
            or bool(validate_planarity(instance, BusLayout(lowered), eps))
        )
    return out
