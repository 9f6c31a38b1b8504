from __future__ import annotations

import random
from fractions import Fraction as F
from itertools import product

import pytest

from busembed.exact import solve_bep
from busembed.gadgets import (
    CLAUSE_POINTS,
    ChainLink,
    GadgetError,
    PlanarFormulaLayout,
    Segment,
    UndecodableLayoutError,
    build_instance,
    compose_signs,
    decode_assignment,
    dedupe_coordinates,
    find_crossing,
    horizontal_chain,
    load_formula,
    parse_dimacs,
    rising_chain,
    simulate_segment,
    size_bound,
    vertical_chain,
)
from busembed.model import BusLayout, ColoredPointSet, Point, validate_planarity
from oracles import candidate_heights


def chain_patterns(chain, eps=1):
    """Bus type strings (T above, F below, C between) over a grid of heights."""
    I = ColoredPointSet(chain.points())
    ys = sorted({p.y for p in I.points})
    cands = candidate_heights(I, 2)
    cands += [ys[-1] + eps + F(j, 3) for j in range(chain.m + 1)]
    cands += [ys[0] - eps - F(j, 3) for j in range(chain.m + 1)]
    out = set()
    for hs in product(sorted(set(cands)), repeat=I.k):
        if validate_planarity(I, BusLayout(dict(zip(I.colors, hs)), I), eps):
            continue
        pat = ""
        for c, h in zip(I.colors, hs):
            own = [p.y for p in I.points_of(c)]
            pat += "T" if h > max(own) else "F" if h < min(own) else "C"
        out.add(pat)
    return out


@pytest.mark.parametrize("make", [horizontal_chain, rising_chain])
def test_interleaved_chains_alternate(make):
    assert chain_patterns(make(2)) == {"TF", "FT"}
    assert chain_patterns(make(3)) == {"TFT", "FTF"}
    assert make(3).sign == 1 and make(2).sign == -1


def test_stacked_links_do_not_propagate():
    assert chain_patterns(vertical_chain(2)) == {"TT", "TF", "FT", "FF"}
    assert vertical_chain(2).sign is None
    with pytest.raises(GadgetError):
        compose_signs([horizontal_chain(2), vertical_chain(2)])


def test_compose_signs():
    assert compose_signs([horizontal_chain(2), rising_chain(2)]) == 1
    assert compose_signs([horizontal_chain(2), rising_chain(3)]) == -1


def test_rise_above_eps_rejected():
    with pytest.raises(GadgetError):
        rising_chain(3, rise=F(3, 2))


def test_link_interleaving():
    a = ChainLink("a", 0, 2, 0)
    assert a.interleaves(ChainLink("b", 1, 3, 0))
    assert not a.interleaves(ChainLink("b", F(1, 2), 1, 0))
    with pytest.raises(GadgetError):
        ChainLink("c", 2, 1, 0)


def test_simulate_segment_counts():
    assert len(simulate_segment(Segment(0, 0, 4, 0))) == 1
    for height in (1, 2, 5, 8):
        pairs = simulate_segment(Segment(0, 0, 0, height))
        assert len(pairs) == -(-height // 2) + 1
        assert pairs[0][0][1] == 0 and pairs[-1][1][1] == height
        for (a, b), (c, _) in zip(pairs, pairs[1:]):
            assert b[1] == c[1] and b[1] - a[1] < 2
    with pytest.raises(GadgetError):
        Segment(0, 0, 1, 1)


def _probe_blocked(pairs, h, eps=1):
    """A probe bus at height h crossing the column is impossible for some pair."""
    heights = [F(t, 16) for t in range(-40, 120)]
    for j, (a, b) in enumerate(pairs):
        I = ColoredPointSet([Point(*a, "w"), Point(*b, "w"), Point(-1, 50, "p"), Point(1, 50, "p")])
        if all(validate_planarity(I, BusLayout({"w": y, "p": h}), eps) for y in heights):
            return True
    return False


def test_simulated_wall_blocks_exactly_its_extent():
    pairs = simulate_segment(Segment(0, 0, 0, 5))
    probes = [F(t, 4) for t in range(-8, 29)]
    assert [h for h in probes if _probe_blocked(pairs, h)] == [h for h in probes if 0 <= h <= 5]


def test_single_clause_sizes():
    layout = PlanarFormulaLayout([(1, 2, 3)], 3)
    I, eps = build_instance(layout)
    assert I.metadata["clauses"][0]["gadget_points"] == CLAUSE_POINTS == 118
    assert I.n == 240 <= size_bound(3, 1)


def test_size_bound_holds():
    for clauses in ([(1,)], [(1, -2)], [(1, -2, 3), (2, -3, 4)], [(-1, -2, -3), (2, 3, 4)]):
        layout = PlanarFormulaLayout(clauses, 4)
        I, _ = build_instance(layout)
        assert I.n <= size_bound(4, len(clauses))


def test_two_clause_formula_solves_and_decodes():
    layout = PlanarFormulaLayout([(1, -2, 3), (2, -3, 4)], 4)
    I, eps = build_instance(layout)
    res = solve_bep(I, eps)
    assert res and validate_planarity(I, res, eps) == []
    assert layout.evaluate(decode_assignment(I, res))


def test_unsatisfiable_pair_of_units():
    layout = PlanarFormulaLayout([(1,), (-1,)], 1)
    I, eps = build_instance(layout)
    assert not solve_bep(I, eps)


def test_verdict_follows_satisfiability_on_small_formulas():
    rng = random.Random(4)
    for _ in range(12):
        clauses = []
        for _ in range(rng.randint(1, 2)):
            vs = rng.sample([1, 2, 3], rng.randint(1, 3))
            clauses.append(tuple(v * rng.choice((1, -1)) for v in vs))
        layout = PlanarFormulaLayout(clauses, 3)
        sat = any(layout.evaluate(dict(enumerate(b, 1))) for b in product((True, False), repeat=3))
        I, eps = build_instance(layout)
        res = solve_bep(I, eps)
        assert bool(res) == sat, clauses
        if res:
            assert layout.evaluate(decode_assignment(I, res))


def test_center_main_variant_is_feasible():
    I, eps = build_instance(PlanarFormulaLayout([(1, 2, 3)], 3), center_main=True)
    assert I.metadata["center_main"] and solve_bep(I, eps)


def test_dedupe_general_position_and_fixpoint():
    layout = PlanarFormulaLayout([(1, -2, 3), (2, -3, 4)], 4)
    I, eps = build_instance(layout)
    assert not I.general_position
    D = dedupe_coordinates(I)
    assert D.general_position
    assert dedupe_coordinates(D).points == D.points
    assert bool(solve_bep(D, eps)) == bool(solve_bep(I, eps))


def test_dedupe_keeps_strict_order():
    rng = random.Random(6)
    pts = [Point(rng.randint(0, 4), rng.randint(0, 4), rng.choice("RB")) for _ in range(12)]
    I = ColoredPointSet(pts, sorted({p.color for p in pts}))
    D = dedupe_coordinates(I)
    for p, q in zip(I.points, D.points):
        for r, s in zip(I.points, D.points):
            if p.x < r.x:
                assert q.x < s.x
            if p.y < r.y:
                assert q.y < s.y


def test_decode_rejects_center_bus_and_foreign_instances():
    I, _ = build_instance(PlanarFormulaLayout([(1,)], 1))
    heights = {c: 100 for c in I.colors}
    assert decode_assignment(I, BusLayout(heights)) == {1: True}
    heights["x1"] = -100
    assert decode_assignment(I, BusLayout(heights)) == {1: False}
    heights["x1"] = 0
    with pytest.raises(UndecodableLayoutError):
        decode_assignment(I, BusLayout(heights))
    J = ColoredPointSet([Point(0, 0, "R")])
    with pytest.raises(UndecodableLayoutError):
        decode_assignment(J, BusLayout({"R": 1}))


def test_find_crossing():
    hit = find_crossing([("a", [(0, 0), (2, 2)]), ("b", [(0, 2), (2, 0)])])
    assert hit["chains"] == ["a", "b"]
    assert find_crossing([("a", [(0, 0), (1, 0)]), ("b", [(0, 1), (1, 1)])]) is None


def test_parse_dimacs():
    text = "c comment\np cnf 3 2\n1 -2 0\n2 3\n-1 0\n"
    assert parse_dimacs(text) == (3, [(1, -2), (2, 3, -1)])
    assert parse_dimacs("1 2 0") == (2, [(1, 2)])
    with pytest.raises(GadgetError):
        parse_dimacs("p cnf x\n")
    with pytest.raises(GadgetError):
        parse_dimacs("1 two 0\n")


def test_load_formula_with_sidecar():
    layout = load_formula("p cnf 2 2\n1 2 0\n-1 0\n", '{"sides": ["bottom", "top"]}')
    assert layout.sides == ["bottom", "top"]


@pytest.mark.parametrize(
    "clauses, kwargs",
    [
        ([(1, 2, 3, 4)], {}),
        ([(1, 1)], {}),
        ([(5,)], {}),
        ([(1,), (2,), (3,)], {}),
        ([(1,)], {"sides": ["left"]}),
        ([(1,)], {"variable_order": [1, 1]}),
    ],
)
def test_layout_validation_errors(clauses, kwargs):
    with pytest.raises(GadgetError):
        PlanarFormulaLayout(clauses, 4 if not kwargs.get("variable_order") else 2, **kwargs)
