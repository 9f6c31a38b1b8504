"""Instances, layouts and the geometric predicates every solver relies on.

A bus of color ``c`` is the horizontal segment ``[x_l(c), x_r(c)] x {y(c)}``.
Each point is joined to its own bus by a vertical connection.  A layout is
planar when no bus meets a foreign connection or a foreign point, no two
overlapping buses share a height, and, with ``eps > 0``, no bus passes closer
than ``eps`` to one of its own points.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ._exact import Exact, exact, to_json_number

Color = Hashable


class InvalidInstanceError(ValueError):
    pass


class InvalidLayoutError(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    x: Exact
    y: Exact
    color: Color

    def __post_init__(self):
        object.__setattr__(self, "x", exact(self.x))
        object.__setattr__(self, "y", exact(self.y))


@dataclass(frozen=True)
class Span:
    color: Color
    x_left: Exact
    x_right: Exact

    def __contains__(self, x) -> bool:
        return self.x_left <= x <= self.x_right

    def overlaps(self, other: "Span") -> bool:
        return self.x_left <= other.x_right and other.x_left <= self.x_right


@dataclass(frozen=True)
class EpsilonPolicy:
    """Minimum distance between a bus and its own points (0 disables the rule)."""

    epsilon: Exact = 0

    def __post_init__(self):
        value = exact(self.epsilon)
        if value < 0:
            raise ValueError(f"epsilon must be nonnegative, got {value}")
        object.__setattr__(self, "epsilon", value)


EpsLike = Union[EpsilonPolicy, int, float, str, None]


def as_epsilon(eps: EpsLike) -> Exact:
    if eps is None:
        return 0
    if isinstance(eps, EpsilonPolicy):
        return eps.epsilon
    return EpsilonPolicy(eps).epsilon


class ColoredPointSet:
    """An immutable colored point set.

    ``colors`` fixes the color order (and may list colors explicitly); by
    default colors are ordered by first appearance.
    """

    __slots__ = ("_points", "_colors", "_members", "_spans", "_by_x", "_xs", "metadata")

    def __init__(
        self,
        points: Iterable[Point],
        colors: Optional[Sequence[Color]] = None,
        metadata: Optional[dict] = None,
    ):
        pts = tuple(p if isinstance(p, Point) else Point(*p) for p in points)
        if colors is None:
            colors = list(dict.fromkeys(p.color for p in pts))
        colors = tuple(colors)
        if len(set(colors)) != len(colors):
            raise InvalidInstanceError("duplicate color in color list")
        members: Dict[Color, List[int]] = {c: [] for c in colors}
        for i, p in enumerate(pts):
            if p.color not in members:
                raise InvalidInstanceError(f"point {i} has unknown color {p.color!r}")
            members[p.color].append(i)
        for c, idx in members.items():
            if not idx:
                raise InvalidInstanceError(f"color {c!r} has no points")
        self._points = pts
        self._colors = colors
        self._members = {c: tuple(v) for c, v in members.items()}
        self._spans: Optional[Dict[Color, Span]] = None
        order = sorted(range(len(pts)), key=lambda i: (pts[i].x, pts[i].y))
        self._by_x = tuple(order)
        self._xs = tuple(pts[i].x for i in order)
        self.metadata = dict(metadata or {})

    @property
    def points(self) -> Tuple[Point, ...]:
        return self._points

    @property
    def colors(self) -> Tuple[Color, ...]:
        return self._colors

    @property
    def n(self) -> int:
        return len(self._points)

    @property
    def k(self) -> int:
        return len(self._colors)

    def members(self, color: Color) -> Tuple[int, ...]:
        return self._members[color]

    def points_of(self, color: Color) -> List[Point]:
        return [self._points[i] for i in self._members[color]]

    @property
    def general_position(self) -> bool:
        xs = [p.x for p in self._points]
        ys = [p.y for p in self._points]
        return len(set(xs)) == len(xs) and len(set(ys)) == len(ys)

    def spans(self) -> Dict[Color, Span]:
        if self._spans is None:
            self._spans = compute_spans(self)
        return self._spans

    def indices_in_x_range(self, lo, hi) -> List[int]:
        """Indices of points with ``lo <= x <= hi``, in x order."""
        a = bisect_left(self._xs, lo)
        b = bisect_right(self._xs, hi)
        return list(self._by_x[a:b])

    def with_points(self, points: Iterable[Point]) -> "ColoredPointSet":
        return ColoredPointSet(points, self._colors, self.metadata)

    def restricted_to(self, colors: Iterable[Color]) -> "ColoredPointSet":
        keep = [c for c in self._colors if c in set(colors)]
        return ColoredPointSet([p for p in self._points if p.color in keep], keep)

    def __len__(self) -> int:
        return len(self._points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ColoredPointSet):
            return NotImplemented
        return self._points == other._points and self._colors == other._colors

    def __hash__(self):
        return hash((self._points, self._colors))

    def __repr__(self) -> str:
        return f"ColoredPointSet(n={self.n}, k={self.k})"


@dataclass(frozen=True)
class BusLayout:
    """Bus heights per color; the instance is kept for convenience."""

    bus_y: Mapping[Color, Exact]
    instance: Optional[ColoredPointSet] = field(default=None, compare=False, repr=False)
    stats: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "bus_y", {c: exact(y) for c, y in dict(self.bus_y).items()})

    def __getitem__(self, color: Color) -> Exact:
        return self.bus_y[color]

    def __contains__(self, color: Color) -> bool:
        return color in self.bus_y

    def __bool__(self) -> bool:
        return True

    def order(self) -> List[Color]:
        """Colors sorted bottom to top (ties broken by the instance's color order)."""
        rank = {c: i for i, c in enumerate(self.instance.colors)} if self.instance else {}
        return sorted(self.bus_y, key=lambda c: (self.bus_y[c], rank.get(c, 0)))

    def to_json(self) -> dict:
        return {"buses": {str(c): to_json_number(y) for c, y in self.bus_y.items()}}


@dataclass
class Infeasible:
    """Negative verdict of a solver; falsy so ``if result:`` reads naturally."""

    reason: str
    witness: Optional[dict] = None
    stats: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        out = {"feasible": False, "reason": self.reason}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass(frozen=True)
class ConflictMatrix:
    """Pairs ``(point index, color)`` of points lying inside a foreign span."""

    pairs: frozenset

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs, key=lambda pc: (pc[0], str(pc[1]))))

    def __contains__(self, item) -> bool:
        return item in self.pairs


@dataclass(frozen=True)
class Violation:
    kind: str  # crossing | point_on_bus | bus_overlap | epsilon
    color: Color
    point: Optional[int] = None
    other_color: Optional[Color] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "color": str(self.color)}
        if self.point is not None:
            out["point"] = self.point
        if self.other_color is not None:
            out["other_color"] = str(self.other_color)
        return out


def compute_spans(instance: ColoredPointSet) -> Dict[Color, Span]:
    spans = {}
    for c in instance.colors:
        idx = instance.members(c)
        if not idx:
            raise InvalidInstanceError(f"color {c!r} has no points")
        xs = [instance.points[i].x for i in idx]
        spans[c] = Span(c, min(xs), max(xs))
    return spans


def conflicting_pairs(instance: ColoredPointSet) -> ConflictMatrix:
    pairs = set()
    for c, span in instance.spans().items():
        for i in instance.indices_in_x_range(span.x_left, span.x_right):
            if instance.points[i].color != c:
                pairs.add((i, c))
    return ConflictMatrix(frozenset(pairs))


def _require_buses(instance: ColoredPointSet, layout: BusLayout) -> None:
    missing = [c for c in instance.colors if c not in layout]
    if missing:
        raise InvalidLayoutError(f"no bus for color(s) {missing!r}")


def validate_planarity(
    instance: ColoredPointSet, layout: BusLayout, eps: EpsLike = 0
) -> List[Violation]:
    """Every planarity violation of ``layout``; empty means a valid drawing."""
    _require_buses(instance, layout)
    epsilon = as_epsilon(eps)
    pts = instance.points
    spans = instance.spans()
    report: List[Violation] = []
    for c in instance.colors:
        yc = layout[c]
        span = spans[c]
        for i in instance.indices_in_x_range(span.x_left, span.x_right):
            p = pts[i]
            if p.color == c:
                continue
            if p.y == yc:
                report.append(Violation("point_on_bus", c, i))
                continue
            yo = layout[p.color]
            lo, hi = (p.y, yo) if p.y <= yo else (yo, p.y)
            if lo <= yc <= hi:
                report.append(Violation("crossing", c, i))
        if epsilon > 0:
            for i in instance.members(c):
                if abs(yc - pts[i].y) < epsilon:
                    report.append(Violation("epsilon", c, i))
    by_height: Dict[Exact, List[Color]] = {}
    for c in instance.colors:
        by_height.setdefault(layout[c], []).append(c)
    for group in by_height.values():
        if len(group) < 2:
            continue
        group.sort(key=lambda c: spans[c].x_left)
        for a, c in enumerate(group):
            for d in group[a + 1 :]:
                if spans[d].x_left > spans[c].x_right:
                    break
                report.append(Violation("bus_overlap", d, other_color=c))
    return report


def is_planar(instance: ColoredPointSet, layout: BusLayout, eps: EpsLike = 0) -> bool:
    return not validate_planarity(instance, layout, eps)


def ink(instance: ColoredPointSet, layout: BusLayout) -> Exact:
    """Total length of all connections; bus lengths are fixed by the input and ignored."""
    _require_buses(instance, layout)
    return exact(sum(abs(layout[p.color] - p.y) for p in instance.points))
