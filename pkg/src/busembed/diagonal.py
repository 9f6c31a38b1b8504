"""Two points per color on the line ``y = x``, and its link to sorting with two stacks.

A permutation ``pi`` of ``1..k`` describes the instance: positions ``1..k``
of the diagonal carry the first points of colors ``pi[0], ..., pi[k-1]`` and
positions ``k+1..2k`` the second points of colors ``1..k``.  A bus of color
``i`` between its two points crosses the diagonal once, so walking up the
diagonal meets each color three times: first point, bus, second point.  Read
as push onto stack I, move to stack II, print, those events form a word that
sorts ``pi`` with two stacks in series, and a layout is planar exactly when
every move takes the top of its stack.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .model import BusLayout, ColoredPointSet, Infeasible, InvalidLayoutError, Point, validate_planarity

OPS = "abg"  # read into stack I, move to stack II, print
_GREEK = {"α": "a", "β": "b", "γ": "g"}


class InvalidWordError(ValueError):
    def __init__(self, message: str, position: Optional[int] = None):
        super().__init__(message if position is None else f"{message} (position {position})")
        self.position = position


@dataclass(frozen=True)
class SortingWord:
    """Sequence of ``(op, i)`` letters with ``op`` in ``"abg"``."""

    letters: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def parse(cls, text: str) -> "SortingWord":
        letters = []
        for tok in text.replace(",", " ").split():
            tok = _GREEK.get(tok[0], tok[0]) + tok[1:].lstrip("_")
            m = re.fullmatch(r"([abg])(\d+)", tok)
            if not m:
                raise InvalidWordError(f"cannot parse letter {tok!r}", len(letters))
            letters.append((m.group(1), int(m.group(2))))
        return cls(tuple(letters))

    def __str__(self) -> str:
        return " ".join(f"{op}{i}" for op, i in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other: "SortingWord") -> "SortingWord":
        return SortingWord(self.letters + other.letters)

    def restrict(self, ops: Iterable[str]) -> "SortingWord":
        keep = set(ops)
        return SortingWord(tuple(l for l in self.letters if l[0] in keep))

    def subscripts(self) -> List[int]:
        """Subscripts of the read and print letters, in order."""
        return [i for op, i in self.letters if op != "b"]


EMPTY_WORD = SortingWord()


def check_permutation(pi: Sequence[int]) -> List[int]:
    pi = [int(v) for v in pi]
    if sorted(pi) != list(range(1, len(pi) + 1)):
        raise ValueError(f"{pi} is not a permutation of 1..{len(pi)}")
    return pi


def replay(word: SortingWord, pi: Sequence[int]) -> List[int]:
    """Run the word on two stacks and return the printed sequence.

    Raises ``InvalidWordError`` at the first letter that reads the wrong input
    element or pops something other than a stack top, and for incomplete words.
    """
    pi = check_permutation(pi)
    pos = 0
    s1: List[int] = []
    s2: List[int] = []
    out: List[int] = []
    for at, (op, i) in enumerate(word):
        if op == "a":
            if pos >= len(pi) or pi[pos] != i:
                raise InvalidWordError(f"a{i} does not read the next input element", at)
            s1.append(i)
            pos += 1
        elif op == "b":
            if not s1 or s1[-1] != i:
                raise InvalidWordError(f"b{i} does not pop the top of stack I", at)
            s2.append(s1.pop())
        elif op == "g":
            if not s2 or s2[-1] != i:
                raise InvalidWordError(f"g{i} does not pop the top of stack II", at)
            out.append(s2.pop())
        else:
            raise InvalidWordError(f"unknown operation {op!r}", at)
    if pos < len(pi) or s1 or s2:
        raise InvalidWordError("word leaves elements unprinted", len(word))
    return out


def is_pushall_word(word: SortingWord, pi: Sequence[int]) -> bool:
    """True when every read precedes every print and the output is ``1..k``."""
    pi = check_permutation(pi)
    replay(word, pi)
    return word.subscripts() == pi + list(range(1, len(pi) + 1))


def pushall_sort(pi: Sequence[int]):
    """First pushall sorting word in letter order (read < move < print, then subscript).

    Depth-first search over stack states, remembering dead states.  Returns a
    ``SortingWord`` or an ``Infeasible`` with the number of states explored.
    """
    pi = check_permutation(pi)
    k = len(pi)
    dead = set()
    word: List[Tuple[str, int]] = []

    def dfs(pos: int, s1: Tuple[int, ...], s2: Tuple[int, ...], printed: int) -> bool:
        if printed == k:
            return True
        key = (pos, s1, s2)
        if key in dead:
            return False
        if pos < k:
            word.append(("a", pi[pos]))
            if dfs(pos + 1, s1 + (pi[pos],), s2, printed):
                return True
            word.pop()
        # stack II must stay decreasing upward or its bottom can never be printed
        if s1 and (not s2 or s1[-1] < s2[-1]):
            word.append(("b", s1[-1]))
            if dfs(pos, s1[:-1], s2 + (s1[-1],), printed):
                return True
            word.pop()
        if pos == k and s2 and s2[-1] == printed + 1:
            word.append(("g", s2[-1]))
            if dfs(pos, s1, s2[:-1], printed + 1):
                return True
            word.pop()
        dead.add(key)
        return False

    if dfs(0, (), (), 0):
        return SortingWord(tuple(word))
    return Infeasible("permutation is not pushall sortable with two stacks", stats={"dead_states": len(dead)})


def diagonal_instance(pi: Sequence[int]) -> ColoredPointSet:
    pi = check_permutation(pi)
    k = len(pi)
    seq = pi + list(range(1, k + 1))
    return ColoredPointSet(
        [Point(j, j, c) for j, c in enumerate(seq, start=1)],
        list(range(1, k + 1)),
        {"permutation": pi},
    )


def slot_drawing(word: SortingWord) -> Tuple[ColoredPointSet, BusLayout]:
    """Literal slot geometry: letter ``j`` (1-based) occupies ``(j, j)``.

    Read and print letters become points, a move letter becomes the bus
    height of its color.  Works for any word in which each color has one
    letter of each kind, valid or not, so broken words can be inspected.
    """
    pts = []
    bus: Dict[int, int] = {}
    seen: Dict[int, set] = {}
    for j, (op, i) in enumerate(word, start=1):
        kinds = seen.setdefault(i, set())
        if op in kinds:
            raise InvalidWordError(f"{op}{i} occurs twice", j - 1)
        kinds.add(op)
        if op == "b":
            bus[i] = j
        else:
            pts.append(Point(j, j, i))
    for i, kinds in seen.items():
        if kinds != set(OPS):
            raise InvalidWordError(f"color {i} lacks one of its three letters")
    colors = sorted(seen)
    return ColoredPointSet(pts, colors), BusLayout({c: bus[c] for c in colors})


def word_to_layout(word: SortingWord, pi: Sequence[int]) -> BusLayout:
    """Center-bus layout of ``diagonal_instance(pi)`` built from a pushall word.

    The slot drawing is mapped monotonically onto the instance: point slots go
    to diagonal positions ``1..2k`` and each run of bus slots is spread evenly
    in the gap after the preceding point.
    """
    if not is_pushall_word(word, pi):
        raise InvalidWordError("word is not a pushall word for this permutation")
    instance = diagonal_instance(pi)
    seen_points = 0
    run: List[int] = []
    heights: Dict[int, Fraction] = {}

    def flush():
        for r, c in enumerate(run, start=1):
            heights[c] = Fraction(seen_points) + Fraction(r, len(run) + 1)
        run.clear()

    for op, i in word:
        if op == "b":
            run.append(i)
        else:
            flush()
            seen_points += 1
    flush()
    return BusLayout(heights, instance, {"word": str(word)})


def layout_to_word(instance: ColoredPointSet, layout: BusLayout) -> SortingWord:
    """Read a planar center-bus layout of a diagonal instance from bottom to top."""
    if validate_planarity(instance, layout):
        raise InvalidLayoutError("layout is not planar")
    events = []
    first = set()
    for p in sorted(instance.points, key=lambda p: p.y):
        if p.x != p.y:
            raise InvalidLayoutError("instance is not on the diagonal")
        op = "g" if p.color in first else "a"
        first.add(p.color)
        events.append((p.y, 1, op, p.color))
    for c in instance.colors:
        ys = [p.y for p in instance.points_of(c)]
        y = layout[c]
        if len(ys) != 2 or not min(ys) < y < max(ys):
            raise InvalidLayoutError(f"bus of {c!r} is not a center bus")
        events.append((y, 0, "b", c))
    events.sort(key=lambda e: (e[0], e[1]))
    return SortingWord(tuple((op, c) for _, _, op, c in events))


def to_center_buses(instance: ColoredPointSet, layout: BusLayout) -> BusLayout:
    """Move every bus lying above or below both of its points between them.

    Colors are handled from the narrowest span outwards.  A bus above its
    points drops to halfway between its upper point and the highest foreign
    point or bus met inside the span; buses below rise symmetrically.
    """
    spans = instance.spans()
    heights = dict(layout.bus_y)
    pts = instance.points
    for c in sorted(instance.colors, key=lambda c: spans[c].x_right - spans[c].x_left):
        lo, hi = sorted(p.y for p in instance.points_of(c))
        y = heights[c]
        if lo < y < hi:
            continue
        span = spans[c]
        obstacles = [
            pts[i].y
            for i in instance.indices_in_x_range(span.x_left, span.x_right)
            if pts[i].color != c
        ]
        obstacles += [
            heights[d]
            for d in instance.colors
            if d != c and spans[d].overlaps(span)
        ]
        inner = [v for v in obstacles if lo < v < hi]
        if y >= hi:
            heights[c] = Fraction(max(inner, default=lo) + hi, 2)
        else:
            heights[c] = Fraction(lo + min(inner, default=hi), 2)
    return BusLayout(heights, instance)


def solve_diagonal(pi: Sequence[int]):
    """Layout of ``diagonal_instance(pi)`` from a pushall word, or ``Infeasible``."""
    word = pushall_sort(pi)
    if not word:
        return word
    return word_to_layout(word, pi)
