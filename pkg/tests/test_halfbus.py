from __future__ import annotations

import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from busembed.halfbus import build_clauses, candidates, solve_halfbep
from busembed.model import ColoredPointSet, Point, validate_planarity
from busembed.sweep import BusType, classify
from busembed.twosat import FormulaError, TwoSatFormula, Unsatisfiable, implication_graph, solve_2sat
from frozen import (
    HALFBUS_UNIQUE,
    HALFBUS_UNIQUE_ASSIGNMENT,
    HALFBUS_XOR_CYCLE,
    TABLE_BOXES,
    TABLE_RULES,
    random_box,
    table_pair,
)
from oracles import halfbus_brute, random_mixed_instance, twosat_brute
from test_model import instances


def solutions(formula):
    return {bits for bits in product((True, False), repeat=formula.num_vars) if formula.evaluate(bits)}


def test_empty_formula_all_true():
    assert solve_2sat(TwoSatFormula(3, [])) == [True, True, True]


def test_all_four_clauses_unsat():
    f = TwoSatFormula(2, [(1, 2), (-1, 2), (1, -2), (-1, -2)])
    assert isinstance(solve_2sat(f), Unsatisfiable)


def test_unit_clauses():
    f = TwoSatFormula(2, [(1,), (-2,)])
    assert solve_2sat(f) == [True, False]


def test_bad_literal_rejected():
    with pytest.raises(FormulaError):
        TwoSatFormula(2, [(1, 3)])
    with pytest.raises(FormulaError):
        TwoSatFormula(2, [(1, 2, -1)])


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 10).flatmap(
    lambda v: st.tuples(
        st.just(v),
        st.lists(st.tuples(st.integers(1, v), st.booleans(), st.integers(1, v), st.booleans()), max_size=30),
    )
))
def test_2sat_matches_truth_table(data):
    v, raw = data
    clauses = [(a if sa else -a, b if sb else -b) for a, sa, b, sb in raw]
    res = solve_2sat(TwoSatFormula(v, clauses))
    brute = twosat_brute(v, clauses)
    assert isinstance(res, Unsatisfiable) == (not brute)
    if not isinstance(res, Unsatisfiable):
        assert tuple(res) in brute


def test_implication_graph_edges():
    ptr, adj = implication_graph(TwoSatFormula(2, [(1, -2)]))
    # not x1 -> not x2 and x2 -> x1
    assert list(adj[ptr[1]:ptr[2]]) == [3]
    assert list(adj[ptr[2]:ptr[3]]) == [0]


def test_dimacs_dump():
    text = TwoSatFormula(2, [(1, -2), (2,)], ["a", "b"]).to_dimacs()
    assert "p cnf 2 2" in text and "1 -2 0" in text and "2 0" in text


def test_table_cells():
    for (config, case), rule in TABLE_RULES.items():
        I = table_pair(config, TABLE_BOXES[case])
        expected = {bits for bits in product((True, False), repeat=2) if rule(*bits)}
        assert solutions(build_clauses(I)) == expected, (config, case)
        assert set(halfbus_brute(I)) == expected, (config, case)


def test_table_cells_random_realizations():
    rng = random.Random(12)
    for (config, case), rule in TABLE_RULES.items():
        expected = {bits for bits in product((True, False), repeat=2) if rule(*bits)}
        for _ in range(10):
            I = table_pair(config, random_box(rng, case))
            assert solutions(build_clauses(I)) == expected, (config, case)


def test_single_clause_examples():
    # x_c false, spelled as one clause per forbidden combination
    assert sorted(build_clauses(table_pair(1, TABLE_BOXES["a"])).clauses) == [(-1, -2), (-1, 2)]
    # x_c' implies x_c: only (x_c false, x_c' true) is excluded
    assert sorted(build_clauses(table_pair(2, TABLE_BOXES["f"])).clauses) == [(1, -2)]
    assert len(build_clauses(table_pair(2, TABLE_BOXES["e"]))) == 2


def test_disjoint_colors_unconstrained():
    I = ColoredPointSet([Point(0, 0, "R"), Point(1, 1, "R"), Point(2, 2, "B"), Point(3, 3, "B")])
    assert len(build_clauses(I)) == 0
    assert solve_halfbep(I)


def test_unique_assignment():
    assert halfbus_brute(HALFBUS_UNIQUE) == [HALFBUS_UNIQUE_ASSIGNMENT]
    layout = solve_halfbep(HALFBUS_UNIQUE)
    assert layout and validate_planarity(HALFBUS_UNIQUE, layout) == []
    got = tuple(classify(HALFBUS_UNIQUE, layout, c) is BusType.HALFCAP for c in HALFBUS_UNIQUE.colors)
    assert got == HALFBUS_UNIQUE_ASSIGNMENT


def test_odd_xor_cycle():
    I = HALFBUS_XOR_CYCLE
    for a, b in [("P", "Q"), ("Q", "S"), ("P", "S")]:
        assert sorted(halfbus_brute(I.restricted_to([a, b]))) == [(False, True), (True, False)]
    assert halfbus_brute(I) == []
    assert not solve_halfbep(I)


@settings(max_examples=80, deadline=None)
@given(instances(max_k=5))
def test_halfbus_matches_enumeration(I):
    res = solve_halfbep(I)
    good = halfbus_brute(I)
    assert bool(res) == bool(good)
    if res:
        assert validate_planarity(I, res) == []
        cand = candidates(I)
        assert all(res[c] in cand[c] for c in I.colors)


def test_clause_count_quadratic():
    rng = random.Random(3)
    for _ in range(20):
        I = random_mixed_instance(rng, 10, 4)
        assert len(build_clauses(I)) <= 4 * I.k * (I.k - 1) // 2


def test_2sat_large_chain():
    n = 20000
    arr = np.array([(-i, i + 1) for i in range(1, n)] + [(1, 1)], dtype=np.int64)
    res = solve_2sat(TwoSatFormula(n, arr))
    assert res and all(res)
