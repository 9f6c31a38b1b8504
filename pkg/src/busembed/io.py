"""JSON interchange for instances and layouts.

Instance: ``{"points": [{"x": num, "y": num, "color": "str"}], "epsilon": num}``
with an optional ``"metadata"`` object.  Layout: ``{"buses": {"color": y}}``.
Numbers may be JSON numbers or exact ``"p/q"`` strings; output uses the
shortest exact form.
"""

from __future__ import annotations

import json
from typing import Any, Optional, Tuple

from ._exact import exact, to_json_number
from .model import BusLayout, ColoredPointSet, EpsilonPolicy, Point, as_epsilon


class InputFormatError(ValueError):
    """Malformed input; ``position`` is ``(line, column)`` when known."""

    def __init__(self, message: str, position: Optional[Tuple[int, int]] = None, source: str = "<input>"):
        where = f"{source}:{position[0]}:{position[1]}: " if position else f"{source}: "
        super().__init__(where + message)
        self.position = position
        self.source = source


def _load(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(exc.msg, (exc.lineno, exc.colno), source) from None


def _number(value, what: str, source: str):
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise InputFormatError(f"{what} is not a number: {value!r}", source=source)
    try:
        return exact(value)
    except (ValueError, TypeError) as exc:
        raise InputFormatError(f"{what}: {exc}", source=source) from None


def instance_from_json(data: Any, source: str = "<input>") -> Tuple[ColoredPointSet, EpsilonPolicy]:
    if not isinstance(data, dict) or not isinstance(data.get("points"), list):
        raise InputFormatError("instance needs a 'points' list", source=source)
    points = []
    for i, raw in enumerate(data["points"]):
        if not isinstance(raw, dict) or not {"x", "y", "color"} <= raw.keys():
            raise InputFormatError(f"points[{i}] needs x, y and color", source=source)
        x = _number(raw["x"], f"points[{i}].x", source)
        y = _number(raw["y"], f"points[{i}].y", source)
        points.append(Point(x, y, str(raw["color"])))
    eps = _number(data.get("epsilon", 0), "epsilon", source)
    if eps < 0:
        raise InputFormatError("epsilon must be nonnegative", source=source)
    meta = data.get("metadata") or {}
    if not isinstance(meta, dict):
        raise InputFormatError("metadata must be an object", source=source)
    colors = meta.get("colors")
    try:
        instance = ColoredPointSet(points, colors, meta)
    except ValueError as exc:
        raise InputFormatError(str(exc), source=source) from None
    return instance, EpsilonPolicy(eps)


def instance_to_json(instance: ColoredPointSet, eps=0) -> dict:
    out = {
        "points": [
            {"x": to_json_number(p.x), "y": to_json_number(p.y), "color": str(p.color)} for p in instance.points
        ],
        "epsilon": to_json_number(as_epsilon(eps)),
    }
    if instance.metadata:
        out["metadata"] = instance.metadata
    return out


def layout_from_json(data: Any, instance: Optional[ColoredPointSet] = None, source: str = "<input>") -> BusLayout:
    if not isinstance(data, dict) or not isinstance(data.get("buses"), dict):
        raise InputFormatError("layout needs a 'buses' object", source=source)
    buses = {str(c): _number(y, f"buses[{c!r}]", source) for c, y in data["buses"].items()}
    return BusLayout(buses, instance)


def read_instance(text: str, source: str = "<input>") -> Tuple[ColoredPointSet, EpsilonPolicy]:
    return instance_from_json(_load(text, source), source)


def read_layout(text: str, instance: Optional[ColoredPointSet] = None, source: str = "<input>") -> BusLayout:
    return layout_from_json(_load(text, source), instance, source)


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"
