"""Bus embedding instances built from planar 3-SAT formulas.

Building block: a chain link, two same-color points at equal height.  With
``eps = 1`` its bus lies at least one unit above (true) or below (false) the
points.  Two links whose x-ranges interleave (``a1 < b1 < a2 < b2``) and whose
heights differ by at most ``eps`` can never take the same type: two buses on
the same side would each have to pass beyond the other's points.  A sequence
of such links is a rigid chain that alternates types, so the last link
determines the first.

A clause gadget connects two main points ``p_l, p_r`` by one bus.  Two walls of
stacked same-x point pairs block every height except three gaps.  Each gap
has a gate link on one edge whose bus, pointing into the gap, covers it; the
gate ends a chain from the literal's variable, wired so that the gate is open
exactly when the literal is true.  Gates of the two lower gaps are reached
from below and the gate of the top gap from above, so no gap is crossed by
more than one foreign chain.  Link pairs above and below ``p_r`` keep the
main bus from escaping around the walls: of two interleaved links at most
``eps`` apart, one always points towards ``p_r`` and caps its connection.

Coordinates are exact and use the constants below (``eps = 1``).  Everything
is built for a clause above the variable line; a clause below it is the same
drawing rotated by half a turn around the origin.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction as F
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ._exact import exact
from .model import BusLayout, ColoredPointSet, EpsilonPolicy, InvalidLayoutError, Point

EPSILON = 1
GRID_UNIT = F(1, 2)  # step of the de-duplication stretch
LINK_WIDTH = F(3, 2)
LINK_STEP = 1  # x advance from one chain link to the next
MAX_RISE = F(7, 8)  # height change between consecutive links, kept below eps
VARIABLE_SPACING = 24
MAIN_Y = 8  # height of p_l, and of p_r unless the main bus is a center bus
CENTER_MAIN_Y = F(35, 2)  # height of p_r for the center-bus variant
# Routes enter the clause at these heights.  The two low ones pass below p_l
# and keep more than 2 eps apart so their buses never meet; the high one
# passes above every gap.
ROUTE_Y = {"low": 3, "mid": 6, "high": 18}
GAP_MARGIN = F(1, 8)
# Gaps 1 and 2 have their gate on the lower edge and are reached from below,
# gap 3 has its gate on the upper edge and is reached from above.  This way
# no gap is crossed by more than one foreign column.
GATE_Y = (10, 13, 17)
GAPS = (
    (GATE_Y[0] + GAP_MARGIN, GATE_Y[0] + 1 - GAP_MARGIN),
    (GATE_Y[1] + GAP_MARGIN, GATE_Y[1] + 1 - GAP_MARGIN),
    (GATE_Y[2] - 1 + GAP_MARGIN, GATE_Y[2] - GAP_MARGIN),
)
# Column of the middle gap above its route height.  It crosses gap 1 with a
# link in the gap's middle and neighbors exactly MAX_RISE away, which leaves
# the main bus a slot in gap 1 for either phase of the column.
MID_COLUMN = tuple(6 + F(29, 40) * j for j in range(1, 6)) + (F(21, 2), F(91, 8), F(195, 16), F(13))
LOW_COLUMN = tuple(3 + MAX_RISE * j for j in range(1, 9))
HIGH_COLUMN = (F(35, 2), F(17))
FLOOR_Y = (MAIN_Y - 2, MAIN_Y - 2 - MAX_RISE)
CEILING_Y = (18, 18 + MAX_RISE)
WALL_BOTTOM = F(9, 8)
WALL_TOP = F(207, 8)
WALL_DX = F(1, 8)  # x step between the stacked pairs of one wall segment
COLUMN_LINKS = 6  # links per literal counted as part of the clause gadget
# Flat stretches use wide links: consecutive ones still interleave and links
# two apart still miss each other, with a fifth of the links.
WIDE_WIDTH = 8
WIDE_STEP = 5
CLAUSE_POINTS = 118


class GadgetError(ValueError):
    pass


class NonPlanarLayoutError(GadgetError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class UndecodableLayoutError(InvalidLayoutError):
    pass


# ---------------------------------------------------------------- chain links


@dataclass(frozen=True)
class ChainLink:
    color: str
    x_left: object
    x_right: object
    y: object

    def __post_init__(self):
        for name in ("x_left", "x_right", "y"):
            object.__setattr__(self, name, exact(getattr(self, name)))
        if self.x_left > self.x_right:
            raise GadgetError(f"link {self.color}: left end right of right end")

    def points(self) -> List[Point]:
        return [Point(self.x_left, self.y, self.color), Point(self.x_right, self.y, self.color)]

    def interleaves(self, other: "ChainLink") -> bool:
        a, b = sorted([self, other], key=lambda l: l.x_left)
        return a.x_left < b.x_left < a.x_right < b.x_right


@dataclass(frozen=True)
class Chain:
    """Links in propagation order.

    ``horizontal`` and ``rising`` chains interleave consecutive links (rising
    ones climb at most ``eps`` per link) and alternate bus types, so their sign
    is ``(-1)^(1 + m)``.  ``vertical`` chains stack links on the same x at
    ``2 eps``; two stacked links admit all four combinations of types, so
    the first link does not determine the last and the chain has no sign.
    """

    orientation: str
    links: Tuple[ChainLink, ...]

    @property
    def m(self) -> int:
        return len(self.links)

    @property
    def sign(self) -> Optional[int]:
        if self.orientation == "vertical":
            return None
        return (-1) ** (1 + self.m)

    def points(self) -> List[Point]:
        return [p for link in self.links for p in link.points()]


def compose_signs(chains: Iterable[Chain]) -> int:
    out = 1
    for ch in chains:
        if ch.sign is None:
            raise GadgetError("a vertical chain does not propagate a value")
        out *= ch.sign
    return out


def horizontal_chain(m: int, x0=0, y=0, prefix: str = "h", leftwards: bool = False) -> Chain:
    """Points in the order a1, b1, a2, b2, ... (mirrored when ``leftwards``)."""
    step = -LINK_STEP if leftwards else LINK_STEP
    links = tuple(
        ChainLink(f"{prefix}{j}", x0 + j * step, x0 + j * step + LINK_WIDTH, y) for j in range(m)
    )
    return Chain("horizontal", links)


def rising_chain(m: int, x0=0, y0=0, rise=MAX_RISE, prefix: str = "r") -> Chain:
    if abs(exact(rise)) > EPSILON:
        raise GadgetError("consecutive links more than eps apart do not propagate")
    links = tuple(
        ChainLink(f"{prefix}{j}", x0 + j * LINK_STEP, x0 + j * LINK_STEP + LINK_WIDTH, y0 + j * exact(rise))
        for j in range(m)
    )
    return Chain("rising", links)


def vertical_chain(m: int, x0=0, y0=0, prefix: str = "v", downwards: bool = False) -> Chain:
    """Links stacked on the same two x-coordinates, ``2 eps`` apart."""
    step = -2 * EPSILON if downwards else 2 * EPSILON
    links = tuple(ChainLink(f"{prefix}{j}", x0, x0 + 3, y0 + j * step) for j in range(m))
    return Chain("vertical", links)


# ------------------------------------------------------------------- segments


@dataclass(frozen=True)
class Segment:
    x0: object
    y0: object
    x1: object
    y1: object

    def __post_init__(self):
        for name in ("x0", "y0", "x1", "y1"):
            object.__setattr__(self, name, exact(getattr(self, name)))
        if self.x0 != self.x1 and self.y0 != self.y1:
            raise GadgetError("segment is not axis-parallel")


def simulate_segment(segment: Segment, eps=EPSILON, dx=WALL_DX) -> List[Tuple[Tuple, Tuple]]:
    """Same-color point pairs that block what the segment blocks.

    A horizontal segment becomes one pair at its endpoints.  A vertical
    segment of height ``H`` becomes ``ceil(H / 2eps) + 1`` pairs, each a
    same-x pair covering a piece of height below ``2 eps``; whatever its bus
    does, the connections of such a pair cover the whole piece, so a bus
    crossing the column is blocked on the full segment.  Consecutive pieces
    touch at their ends and are placed ``dx`` apart so no two points coincide.
    """
    s = segment
    if s.x0 == s.x1 and s.y0 == s.y1:
        return [((s.x0, s.y0), (s.x1, s.y1))]
    if s.y0 == s.y1:
        lo, hi = sorted((s.x0, s.x1))
        return [((lo, s.y0), (hi, s.y0))]
    lo, hi = sorted((s.y0, s.y1))
    height = hi - lo
    m = math.ceil(F(height) / (2 * exact(eps))) + 1
    piece = F(height) / m
    return [
        ((s.x0 + j * dx, exact(lo + j * piece)), (s.x0 + j * dx, exact(lo + (j + 1) * piece)))
        for j in range(m)
    ]


# ------------------------------------------------------------- formula layout


@dataclass
class PlanarFormulaLayout:
    """A 3-CNF formula drawn with variables on a line and clauses above or below it.

    ``clauses`` use DIMACS literals.  ``variable_order`` lists the variables
    left to right; ``sides`` gives ``"top"`` or ``"bottom"`` per clause and
    ``nesting`` the nesting depth per clause on its side.
    """

    clauses: List[Tuple[int, ...]]
    num_vars: int
    variable_order: Optional[List[int]] = None
    sides: Optional[List[str]] = None
    nesting: Optional[List[int]] = None

    def __post_init__(self):
        self.clauses = [tuple(int(v) for v in cl) for cl in self.clauses]
        if self.variable_order is None:
            self.variable_order = list(range(1, self.num_vars + 1))
        if self.sides is None:
            self.sides = ["top" if i % 2 == 0 else "bottom" for i in range(len(self.clauses))]
        if self.nesting is None:
            self.nesting = [0] * len(self.clauses)
        if sorted(self.variable_order) != list(range(1, self.num_vars + 1)):
            raise GadgetError("variable_order must list every variable once")
        if len(self.sides) != len(self.clauses) or len(self.nesting) != len(self.clauses):
            raise GadgetError("one side and one nesting depth per clause")
        for i, cl in enumerate(self.clauses):
            if not 1 <= len(cl) <= 3:
                raise GadgetError(f"clause {i + 1} has {len(cl)} literals; 1 to 3 are supported")
            vs = [abs(v) for v in cl]
            if len(set(vs)) != len(vs):
                raise GadgetError(f"clause {i + 1} uses a variable twice")
            if any(v == 0 or v > self.num_vars for v in vs):
                raise GadgetError(f"clause {i + 1} references an unknown variable")
            if self.sides[i] not in ("top", "bottom"):
                raise GadgetError(f"clause {i + 1}: side must be top or bottom")
        for side in ("top", "bottom"):
            on_side = [i for i, s in enumerate(self.sides) if s == side]
            if len(on_side) > 1:
                raise GadgetError(
                    f"{len(on_side)} clauses on the {side} side; this generator routes one clause per side"
                )
            if any(self.nesting[i] != 0 for i in on_side):
                raise GadgetError("nesting depth must be 0 with one clause per side")

    @classmethod
    def from_dimacs(cls, text: str, sidecar: Optional[Mapping] = None) -> "PlanarFormulaLayout":
        num_vars, clauses = parse_dimacs(text)
        side = dict(sidecar or {})
        return cls(
            clauses,
            num_vars,
            side.get("variable_order"),
            side.get("sides"),
            side.get("nesting"),
        )

    def evaluate(self, assignment: Mapping[int, bool]) -> bool:
        return all(any(assignment[abs(v)] == (v > 0) for v in cl) for cl in self.clauses)


def parse_dimacs(text: str) -> Tuple[int, List[Tuple[int, ...]]]:
    num_vars = None
    clauses: List[Tuple[int, ...]] = []
    current: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise GadgetError(f"line {lineno}: malformed problem line {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            try:
                v = int(tok)
            except ValueError:
                raise GadgetError(f"line {lineno}: not a literal: {tok!r}") from None
            if v == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(v)
    if current:
        clauses.append(tuple(current))
    if num_vars is None:
        num_vars = max((abs(v) for cl in clauses for v in cl), default=0)
    return num_vars, clauses


# ------------------------------------------------------------------- building


@dataclass
class ClauseGadget:
    """The parts of one clause gadget, in the clause's own frame.

    ``s_tl, s_tr`` are the interleaved link pair above ``p_l`` and ``s_bl,
    s_br`` the pair below it; ``walls`` maps ``"l"`` and ``"r"`` to their four
    vertical segments; ``columns`` holds the chain links inside the gadget,
    one column per gap, ending in the gap's gate link.
    """

    p_l: Tuple
    p_r: Tuple
    s_tl: ChainLink
    s_tr: ChainLink
    s_bl: ChainLink
    s_br: ChainLink
    walls: Dict[str, List[Segment]]
    columns: List[List[ChainLink]]
    gaps: List[Tuple]
    color_prefix: str

    def points(self) -> List[Point]:
        main = f"{self.color_prefix}.main"
        out = [Point(*self.p_l, main), Point(*self.p_r, main)]
        for link in (self.s_tl, self.s_tr, self.s_bl, self.s_br):
            out += link.points()
        for side, segments in self.walls.items():
            for j, seg in enumerate(segments):
                for t, (a, b) in enumerate(simulate_segment(seg)):
                    color = f"{self.color_prefix}.wall{side}{j + 1}.{t}"
                    out += [Point(*a, color), Point(*b, color)]
        for column in self.columns:
            for link in column:
                out += link.points()
        return out


def _wall_segments(x, gaps_used: Sequence[int]) -> List[Segment]:
    cuts = [WALL_BOTTOM]
    for g in sorted(gaps_used):
        cuts += list(GAPS[g])
    cuts.append(WALL_TOP)
    return [Segment(x, cuts[i], x, cuts[i + 1]) for i in range(0, len(cuts), 2)]


def _frame_variable_x(layout: PlanarFormulaLayout, side: str) -> Dict[int, F]:
    base = {v: F(i * VARIABLE_SPACING) for i, v in enumerate(layout.variable_order)}
    if side == "top":
        return base
    return {v: -(x + LINK_WIDTH) for v, x in base.items()}


# literal styles left to right, by clause size
_STYLES = {1: ("low",), 2: ("mid", "low"), 3: ("high", "mid", "low")}
_GAP_OF = {"low": 0, "mid": 1, "high": 2}
_COLUMN_OF = {"low": LOW_COLUMN, "mid": MID_COLUMN, "high": HIGH_COLUMN}


def _next_left(links: List[Tuple[F, F]], width) -> F:
    """Left end for the next link of a chain given as ``(left, width)`` pairs.

    It must start inside the previous link and end beyond it, and must clear
    the link two back.
    """
    left, w = links[-1]
    if w == WIDE_WIDTH and width == WIDE_WIDTH:
        x = left + WIDE_STEP
    elif w == WIDE_WIDTH:
        x = left + w - 1
    else:
        x = left + LINK_STEP
    if len(links) > 1:
        x = max(x, sum(links[-2]) + F(1, 4))
    if not (left < x < left + w < x + width):
        raise GadgetError("chain links do not interleave")  # pragma: no cover - guarded by the rules above
    return x


def _route(style: str, positive: bool, side: str, x_var, min_column_x) -> List[Tuple[F, F, F]]:
    """Links ``(left, width, y)`` from the variable link to the gate, gate last.

    A ramp of narrow links climbs to the route height, wide links run flat
    until ``min_column_x``, then narrow links form the column.  Consecutive
    links alternate types.  A gate reached from below is open when it is a cup
    in the clause frame and one reached from above when it is a cap; below the
    line the frame is turned over, which swaps what true means for the
    variable.  One more flat link fixes the parity when needed.
    """
    top = F(ROUTE_Y[style])
    column = _COLUMN_OF[style]
    rise = math.ceil(top / MAX_RISE)
    chain = [(F(x_var), LINK_WIDTH)]
    heights = []
    for j in range(1, rise + 1):
        chain.append((_next_left(chain, LINK_WIDTH), LINK_WIDTH))
        heights.append(top * j / rise)

    def flat():
        chain.append((_next_left(chain, WIDE_WIDTH), WIDE_WIDTH))
        heights.append(top)

    while chain[-1][0] + chain[-1][1] < min_column_x:
        flat()
    odd = positive ^ (side == "bottom") ^ (style == "high")
    if (len(heights) + len(column)) % 2 != int(odd):
        flat()
    for y in column:
        chain.append((_next_left(chain, LINK_WIDTH), LINK_WIDTH))
        heights.append(F(y))
    return [(x, w, y) for (x, w), y in zip(chain[1:], heights)]


def _clause_frame(layout: PlanarFormulaLayout, ci: int, center_main: bool):
    """Clause ``ci`` in its side frame (variables on y = 0, clause above).

    Left to right: the variables, ``p_l``, the column of gap 2, the column of
    gap 1, the column of gap 3 (coming down from above), the two walls and
    ``p_r`` with its ceiling and floor pairs.
    """
    side = layout.sides[ci]
    fx = _frame_variable_x(layout, side)
    prefix = f"C{ci + 1}"
    lits = sorted(layout.clauses[ci], key=lambda v: fx[abs(v)])
    styles = _STYLES[len(lits)]
    px = max(fx.values()) + LINK_WIDTH + 4
    reach = px + 2
    built = {}
    for style in ("mid", "low", "high"):
        if style not in styles:
            continue
        g = styles.index(style)
        lit = lits[g]
        links = _route(style, lit > 0, side, fx[abs(lit)], reach)
        built[style] = (g, lit, links)
        reach = max(x + w for x, w, _ in links) + 3
    wx = reach + 2
    chains, polylines = [], []
    for style in styles:
        g, lit, raw = built[style]
        v = abs(lit)
        links = [
            ChainLink(f"{prefix}.lit{g + 1}.{j}", x, x + w, y) for j, (x, w, y) in enumerate(raw, start=1)
        ]
        chains.append((lit, _GAP_OF[style], links))
        polylines.append((f"{prefix}.lit{g + 1}", [(fx[v], 0)] + [(l.x_left, l.y) for l in links]))
    used = [gap for _, gap, _ in chains]

    def pair(y, left: bool, name: str) -> ChainLink:
        lo = p_r[0] - 1 if left else p_r[0] - F(1, 2)
        return ChainLink(f"{prefix}.{name}", lo, lo + LINK_WIDTH, y)

    p_r = (wx + 6, CENTER_MAIN_Y if center_main else MAIN_Y)
    gadget = ClauseGadget(
        p_l=(px, MAIN_Y),
        p_r=p_r,
        s_tl=pair(CEILING_Y[0], True, "s_tl"),
        s_tr=pair(CEILING_Y[1], False, "s_tr"),
        s_bl=pair(FLOOR_Y[0], True, "s_bl"),
        s_br=pair(FLOOR_Y[1], False, "s_br"),
        walls={"l": _wall_segments(wx, used), "r": _wall_segments(wx + 3, used)},
        columns=[links[-COLUMN_LINKS:] for _, _, links in chains],
        gaps=[GAPS[gap] for gap in used],
        color_prefix=prefix,
    )
    routes = [(lit, links[:-COLUMN_LINKS]) for lit, _, links in chains]
    return gadget, routes, polylines


def _shift(seg: Segment, dy) -> Segment:
    return Segment(seg.x0, seg.y0 + dy, seg.x1, seg.y1 + dy)


def _segments_cross(a, b, c, d) -> bool:
    def orient(p, q, r):
        v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
        return (v > 0) - (v < 0)

    def on(p, q, r):
        return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])

    o1, o2, o3, o4 = orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    return (o1 == 0 and on(a, b, c)) or (o2 == 0 and on(a, b, d)) or (o3 == 0 and on(c, d, a)) or (
        o4 == 0 and on(c, d, b)
    )


def find_crossing(polylines: Sequence[Tuple[str, Sequence[Tuple]]]):
    """First pair of routed chains whose center lines meet, or ``None``.

    Segments are swept by their left end; only segments of different chains
    whose bounding boxes overlap get the exact intersection test.
    """
    segs = []
    for k, (name, pts) in enumerate(polylines):
        for s in range(len(pts) - 1):
            a, b = pts[s], pts[s + 1]
            segs.append((min(a[0], b[0]), max(a[0], b[0]), min(a[1], b[1]), max(a[1], b[1]), k, a, b))
    segs.sort(key=lambda t: t[0])
    active: List[tuple] = []
    for seg in segs:
        x0, x1, y0, y1, k, a, b = seg
        active = [t for t in active if t[1] >= x0]
        for t in active:
            if t[4] != k and t[2] <= y1 and y0 <= t[3] and _segments_cross(a, b, t[5], t[6]):
                return {
                    "chains": sorted([polylines[k][0], polylines[t[4]][0]]),
                    "segments": [[t[5], t[6]], [a, b]],
                }
        active.append(seg)
    return None


def build_instance(layout: PlanarFormulaLayout, center_main: bool = False):
    """Instance and eps policy for ``layout``; metadata maps colors to gadget roles."""
    points: List[Point] = []
    roles: Dict[str, str] = {}
    variables: Dict[str, str] = {}
    for i, v in enumerate(layout.variable_order):
        x = i * VARIABLE_SPACING
        color = f"x{v}"
        points += [Point(x, 0, color), Point(x + LINK_WIDTH, 0, color)]
        roles[color] = "variable"
        variables[str(v)] = color
    polylines_all = []
    clauses_meta = []
    for ci, side in enumerate(layout.sides):
        gadget, routes, polylines = _clause_frame(layout, ci, center_main)
        flip = side == "bottom"

        def place(p: Point) -> Point:
            return Point(-p.x, -p.y, p.color) if flip else p

        gpts = gadget.points()
        for p in gpts:
            roles.setdefault(p.color, "clause")
        roles[f"{gadget.color_prefix}.main"] = "main"
        for g, column in enumerate(gadget.columns):
            roles[column[-1].color] = f"gate{g + 1}"
            for link in column[:-1]:
                roles[link.color] = "column"
        chain_pts = []
        for lit, route in routes:
            for link in route:
                chain_pts += link.points()
                roles[link.color] = "chain"
        points += [place(p) for p in gpts + chain_pts]
        sign = -1 if flip else 1
        polylines_all += [(name, [(sign * x, sign * y) for x, y in line]) for name, line in polylines]
        clauses_meta.append(
            {
                "literals": list(layout.clauses[ci]),
                "side": side,
                "main": f"{gadget.color_prefix}.main",
                "gadget_points": len(gpts),
                "gaps": [[str(sign * a), str(sign * b)] for a, b in gadget.gaps],
            }
        )
    crossing = find_crossing(polylines_all)
    if crossing:
        raise NonPlanarLayoutError("routed chains cross", crossing)
    colors = list(dict.fromkeys(p.color for p in points))
    meta = {
        "generator": "planar-3sat",
        "epsilon": EPSILON,
        "num_vars": layout.num_vars,
        "variables": variables,
        "clauses": clauses_meta,
        "center_main": center_main,
        "roles": roles,
    }
    return ColoredPointSet(points, colors, meta), EpsilonPolicy(EPSILON)


def size_bound(num_vars: int, num_clauses: int) -> int:
    """Upper bound on generated points: C * (n m + m^2) + 2 n with C = 160."""
    return 160 * (num_vars * num_clauses + num_clauses ** 2) + 2 * num_vars


# -------------------------------------------------------------- general position


def _stretch(values: Sequence, rank_key, step) -> List:
    """Spread equal values apart keeping the order of distinct values.

    The ``j``-th extra point of a group moves by ``j`` steps and every larger
    value moves by the total number of extra points so far.
    """
    order = sorted(range(len(values)), key=lambda i: (values[i], rank_key(i)))
    out = [None] * len(values)
    extra = 0
    prev = None
    for i in order:
        v = values[i]
        if v == prev:
            extra += 1
        prev = v
        out[i] = exact(v + extra * step)
    return out


def dedupe_coordinates(instance: ColoredPointSet, step=None) -> ColoredPointSet:
    """Move points apart until no two share an x- or a y-coordinate.

    Ties in x are ordered left end, interior, right end of each color, so two
    spans that touched still overlap and a point on a span's end stays inside.
    The default step is small enough (a fraction of the smallest gap between
    distinct values) that every strict inequality between coordinates
    survives; pass ``step=GRID_UNIT`` for a full grid-unit stretch.
    """
    pts = instance.points
    if not pts:
        return instance
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    if step is None:
        gaps = []
        for vals in (xs, ys):
            d = sorted(set(vals))
            gaps += [b - a for a, b in zip(d, d[1:])]
        min_gap = min(gaps, default=1)
        step = F(min_gap) / (4 * (len(pts) + 1))
    spans = instance.spans()
    color_rank = {c: r for r, c in enumerate(instance.colors)}

    def x_rank(i):
        p = pts[i]
        s = spans[p.color]
        end = 0 if p.x == s.x_left else (2 if p.x == s.x_right else 1)
        if s.x_left == s.x_right:
            end = 1
        return (end, p.y, color_rank[p.color], i)

    def y_rank(i):
        return (pts[i].x, color_rank[pts[i].color], i)

    new_x = _stretch(xs, x_rank, step)
    new_y = _stretch(ys, y_rank, step)
    moved = [Point(new_x[i], new_y[i], p.color) for i, p in enumerate(pts)]
    return ColoredPointSet(moved, instance.colors, instance.metadata)


# ------------------------------------------------------------------- decoding


def decode_assignment(instance: ColoredPointSet, layout: BusLayout) -> Dict[int, bool]:
    """Variable values from the variable links: bus above both points is true."""
    meta = instance.metadata
    if meta.get("generator") != "planar-3sat":
        raise UndecodableLayoutError("instance was not built by the gadget generator")
    out = {}
    for v, color in meta["variables"].items():
        ys = [p.y for p in instance.points_of(color)]
        y = layout[color]
        if y > max(ys):
            out[int(v)] = True
        elif y < min(ys):
            out[int(v)] = False
        else:
            raise UndecodableLayoutError(f"variable {v} has a center bus")
    return out


def load_formula(dimacs_text: str, sidecar_text: Optional[str] = None) -> PlanarFormulaLayout:
    sidecar = json.loads(sidecar_text) if sidecar_text else None
    return PlanarFormulaLayout.from_dimacs(dimacs_text, sidecar)
