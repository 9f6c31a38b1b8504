from __future__ import annotations

import random
from itertools import combinations, permutations, product

import pytest

from busembed.diagonal import diagonal_instance
from busembed.exact import (
    InfeasibleOrderError,
    OracleCapExceeded,
    dp_table,
    enumerate_orders_oracle,
    minimize_ink,
    minimize_ink_global,
    solve_bep,
)
from busembed.model import BusLayout, ColoredPointSet, Point, ink, validate_planarity
from busembed.order import PlacementGrid, solve_with_order
from busembed.smt import smtlib_text, solve_bep_smt
from frozen import INFEASIBLE_4, ORDER_SENSITIVE, SQCAP_BLOCKED
from oracles import brute_bep, random_instance, random_mixed_instance
from test_order import respects


def test_two_colors_always_feasible():
    rng = random.Random(1)
    for _ in range(50):
        I = random_instance(rng, 2, rng.randint(1, 6))
        layout = solve_bep(I)
        assert layout and validate_planarity(I, layout) == []


def test_infeasible_four_colors():
    I = INFEASIBLE_4
    assert not solve_bep(I)
    assert not enumerate_orders_oracle(I)
    assert brute_bep(I) is None
    assert not solve_bep_smt(I)
    for sub in combinations(I.colors, 3):
        J = I.restricted_to(sub)
        assert solve_bep(J) and brute_bep(J) is not None


def test_identity_diagonal_feasible():
    for k in range(1, 9):
        assert solve_bep(diagonal_instance(list(range(1, k + 1))))


def test_oracle_single_color():
    I = ColoredPointSet([Point(0, 0, "R"), Point(3, 1, "R")])
    assert enumerate_orders_oracle(I)


def test_oracle_cap():
    rng = random.Random(0)
    with pytest.raises(OracleCapExceeded):
        enumerate_orders_oracle(random_instance(rng, 9, 1))
    assert enumerate_orders_oracle(random_instance(rng, 9, 1), cap=9)


def test_restricted_blocked_instance_is_feasible_unrestricted():
    layout = enumerate_orders_oracle(SQCAP_BLOCKED)
    assert layout and validate_planarity(SQCAP_BLOCKED, layout) == []
    from busembed.sweep import BusType, classify

    types = {classify(SQCAP_BLOCKED, layout, c) for c in SQCAP_BLOCKED.colors}
    assert types - {BusType.SQCAP}


def test_dp_agrees_with_oracle_and_brute_force():
    rng = random.Random(42)
    for t in range(200):
        I = random_mixed_instance(rng, rng.randint(1, 6), 4)
        eps = rng.choice([0, 0, 3])
        dp = solve_bep(I, eps)
        assert bool(dp) == bool(enumerate_orders_oracle(I, eps))
        if I.k <= 5:
            assert bool(dp) == (brute_bep(I, eps) is not None)
        if dp:
            assert validate_planarity(I, dp, eps) == []


def test_dp_table_monotone_and_state_bound():
    rng = random.Random(8)
    for _ in range(30):
        I = random_mixed_instance(rng, rng.randint(1, 6), 3)
        table = dp_table(I)
        n, k = I.n, I.k
        for mask in range(1 << k):
            for h in range(n + 1):
                if table.F(h, mask):
                    assert table.F(h + 1, mask)
        assert table.stats["states_visited"] <= (n + 2) * 2 ** k


def test_dp_order_materializes():
    rng = random.Random(9)
    for _ in range(30):
        I = random_mixed_instance(rng, 5, 3)
        layout = solve_bep(I)
        if layout:
            again = solve_with_order(I, layout.stats["order"])
            assert again and again.bus_y == layout.bus_y


def test_smt_agrees_with_dp():
    rng = random.Random(21)
    for _ in range(40):
        I = random_mixed_instance(rng, rng.randint(2, 6), 3)
        eps = rng.choice([0, 1, 40])
        a, b = solve_bep(I, eps), solve_bep(I, eps, method="smt")
        assert bool(a) == bool(b)
        if b:
            assert validate_planarity(I, b, eps) == []


def test_smtlib_text_mentions_every_bus():
    text = smtlib_text(ORDER_SENSITIVE, 1)
    assert text.count("declare-const") == 3


def test_unknown_method():
    with pytest.raises(ValueError):
        solve_bep(ORDER_SENSITIVE, method="lp")


def test_minimize_ink_median():
    I = ColoredPointSet([Point(0, 0, "R"), Point(1, 4, "R"), Point(2, 10, "R")])
    layout = minimize_ink(I, ["R"])
    assert layout["R"] == 4 and ink(I, layout) == 10


def test_minimize_ink_disjoint_medians():
    I = ColoredPointSet(
        [Point(0, 0, "R"), Point(1, 6, "R"), Point(2, 9, "R"), Point(5, 1, "B"), Point(6, 3, "B"), Point(7, 8, "B")]
    )
    layout = minimize_ink(I, ["B", "R"])
    assert layout["R"] == 6 and layout["B"] == 3


def _exhaustive_min_ink(I, order, eps=0):
    grid = PlacementGrid.for_instance(I, eps)
    u, k = grid.unit, I.k
    cands = sorted({v + j * u for v in grid.values for j in range(-k, k + 1)})
    best = None
    for hs in product(cands, repeat=k):
        L = BusLayout(dict(zip(I.colors, hs)), I)
        if respects(L, order, I) and not validate_planarity(I, L, eps):
            v = ink(I, L)
            best = v if best is None or v < best else best
    return best


def test_minimize_ink_matches_exhaustive_grid():
    rng = random.Random(4)
    done = 0
    while done < 4:
        I = random_instance(rng, 3, 2, 40, 12)
        feasible = [o for o in permutations(I.colors) if solve_with_order(I, o)]
        if not feasible:
            continue
        order = rng.choice(feasible)
        layout = minimize_ink(I, order)
        assert validate_planarity(I, layout) == [] and respects(layout, order, I)
        assert ink(I, layout) == _exhaustive_min_ink(I, order)
        done += 1


def test_minimize_ink_not_worse_than_bottommost():
    rng = random.Random(6)
    for _ in range(40):
        I = random_mixed_instance(rng, 5, 3)
        eps = rng.choice([0, 2])
        bottom = solve_bep(I, eps)
        if not bottom:
            continue
        order = bottom.stats["order"]
        best = minimize_ink(I, order, eps)
        assert validate_planarity(I, best, eps) == []
        assert ink(I, best) <= ink(I, bottom)


def test_minimize_ink_rejects_infeasible_order():
    with pytest.raises(InfeasibleOrderError):
        minimize_ink(ORDER_SENSITIVE, ["A", "B", "C"])


def test_global_ink_is_least_over_orders():
    rng = random.Random(13)
    for _ in range(10):
        I = random_mixed_instance(rng, 4, 3)
        best = minimize_ink_global(I)
        values = [ink(I, minimize_ink(I, o)) for o in permutations(I.colors) if solve_with_order(I, o)]
        if not values:
            assert not best
        else:
            assert ink(I, best) == min(values)
