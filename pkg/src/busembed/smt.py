"""BEP as a linear real arithmetic satisfiability problem, for instances beyond the subset DP.

Each bus height is a rational unknown.  A point ``p`` inside a foreign span
``c`` requires bus ``c`` to pass strictly above both ``p`` and the bus of
``p``'s color, or strictly below both.  With ``eps > 0`` each bus also keeps
distance ``eps`` from its own points.  The model is exact; the returned
layout is re-checked with the planarity validator.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .model import BusLayout, ColoredPointSet, EpsLike, Infeasible, as_epsilon, conflicting_pairs, validate_planarity


def _lit(value) -> str:
    v = Fraction(value)
    num = f"(- {-v.numerator})" if v.numerator < 0 else str(v.numerator)
    return num if v.denominator == 1 else f"(/ {num} {v.denominator})"


def smtlib_text(instance: ColoredPointSet, eps: EpsLike = 0) -> str:
    """The model as SMT-LIB 2 assertions over reals ``h0 .. h(k-1)``, one per color."""
    epsilon = as_epsilon(eps)
    name = {c: f"h{i}" for i, c in enumerate(instance.colors)}
    out = [f"(declare-const {name[c]} Real)" for c in instance.colors]
    pts = instance.points
    if epsilon > 0:
        for c in instance.colors:
            h = name[c]
            for y in sorted({pts[i].y for i in instance.members(c)}):
                out.append(f"(assert (or (>= {h} {_lit(y + epsilon)}) (<= {h} {_lit(y - epsilon)})))")
    for i, c in conflicting_pairs(instance):
        y = _lit(pts[i].y)
        hc, hd = name[c], name[pts[i].color]
        out.append(f"(assert (or (and (> {hc} {y}) (> {hc} {hd})) (and (< {hc} {y}) (< {hc} {hd}))))")
    return "\n".join(out)


def solve_bep_smt(instance: ColoredPointSet, eps: EpsLike = 0, timeout_ms: Optional[int] = None):
    import z3

    epsilon = as_epsilon(eps)
    if instance.k == 0:
        return BusLayout({}, instance)
    solver = z3.SolverFor("QF_LRA")
    if timeout_ms:
        solver.set("timeout", int(timeout_ms))
    solver.from_string(smtlib_text(instance, epsilon))
    verdict = solver.check()
    stats = {"backend": "smt"}
    if verdict == z3.unsat:
        return Infeasible("no bus order admits a planar layout", stats=stats)
    if verdict != z3.sat:
        raise TimeoutError("SMT backend gave up before deciding the instance")
    model = solver.model()
    values = {d.name(): model[d] for d in model.decls()}
    heights = {}
    for i, c in enumerate(instance.colors):
        val = values.get(f"h{i}")
        heights[c] = Fraction(val.as_fraction()) if val is not None else Fraction(0)
    layout = BusLayout(heights, instance, stats)
    report = validate_planarity(instance, layout, epsilon)
    if report:  # pragma: no cover - the constraints mirror the validator
        raise AssertionError(f"SMT model fails validation: {report[:3]}")
    return layout
