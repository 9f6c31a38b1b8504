from __future__ import annotations

import random
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from busembed.diagonal import (
    InvalidWordError,
    SortingWord,
    diagonal_instance,
    is_pushall_word,
    layout_to_word,
    pushall_sort,
    replay,
    slot_drawing,
    solve_diagonal,
    to_center_buses,
    word_to_layout,
)
from busembed.exact import solve_bep
from busembed.model import InvalidLayoutError, validate_planarity
from frozen import SMALLEST_UNSORTABLE, UNSORTABLE_6_COUNT
from oracles import stack_replay, two_stack_sortable

WORKED = "a3 a2 a1 a4 b4 b1 g1 b2 g2 b3 g3 g4"
EARLY_PRINT = "a3 a2 a1 b1 g1 a4 b4 b2 g2 b3 g3 g4"


def test_worked_word_is_pushall():
    w = SortingWord.parse(WORKED)
    assert replay(w, [3, 2, 1, 4]) == [1, 2, 3, 4]
    assert w.subscripts() == [3, 2, 1, 4, 1, 2, 3, 4]
    assert is_pushall_word(w, [3, 2, 1, 4])


def test_early_print_word_sorts_but_is_not_pushall():
    w = SortingWord.parse(EARLY_PRINT)
    assert replay(w, [3, 2, 1, 4]) == [1, 2, 3, 4]
    assert w.subscripts() == [3, 2, 1, 1, 4, 2, 3, 4]
    assert not is_pushall_word(w, [3, 2, 1, 4])
    with pytest.raises(InvalidWordError):
        word_to_layout(w, [3, 2, 1, 4])


def test_parse_accepts_greek_and_underscores():
    assert SortingWord.parse("α_1, β_1, γ_1") == SortingWord.parse("a1 b1 g1")
    with pytest.raises(InvalidWordError):
        SortingWord.parse("a1 x2")


def test_replay_reports_illegal_pop():
    with pytest.raises(InvalidWordError) as err:
        replay(SortingWord.parse("a1 a2 b1 b2 g1 g2"), [1, 2])
    assert err.value.position == 2
    with pytest.raises(InvalidWordError):
        replay(SortingWord.parse("a1 b1"), [1])


def test_single_color_word():
    assert str(pushall_sort([1])) == "a1 b1 g1"


def test_identity_is_sortable():
    for k in range(1, 9):
        pi = list(range(1, k + 1))
        w = pushall_sort(pi)
        assert w and stack_replay(list(w), pi) == pi


def test_smallest_unsortable_and_count():
    unsortable = [pi for k in range(1, 7) for pi in permutations(range(1, k + 1)) if not two_stack_sortable(pi)]
    assert min(unsortable, key=lambda p: (len(p), p)) == SMALLEST_UNSORTABLE
    assert len(unsortable) == UNSORTABLE_6_COUNT
    assert all(len(p) == 6 for p in unsortable)
    assert not pushall_sort(SMALLEST_UNSORTABLE)


def test_three_routes_agree_up_to_six():
    for k in range(1, 7):
        for pi in permutations(range(1, k + 1)):
            a = bool(pushall_sort(pi))
            assert a == two_stack_sortable(pi), pi
            assert a == bool(solve_bep(diagonal_instance(pi))), pi


def test_found_words_replay_independently():
    for pi in permutations(range(1, 6)):
        w = pushall_sort(pi)
        assert w and stack_replay(list(w), pi) == sorted(pi)
        assert is_pushall_word(w, pi)


def test_word_for_rotated_order():
    w = pushall_sort([4, 1, 2, 3])
    assert w.restrict("a").subscripts() == [4, 1, 2, 3]
    assert is_pushall_word(w, [4, 1, 2, 3])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9).flatmap(lambda k: st.permutations(range(1, k + 1))))
def test_solved_layouts_are_planar_and_round_trip(pi):
    layout = solve_diagonal(pi)
    if not layout:
        assert not two_stack_sortable(pi)
        return
    I = diagonal_instance(pi)
    assert validate_planarity(I, layout) == []
    assert layout_to_word(I, layout) == pushall_sort(pi)


def test_slot_drawing_of_valid_words_is_planar():
    for pi in permutations(range(1, 6)):
        I, L = slot_drawing(pushall_sort(pi))
        assert validate_planarity(I, L) == []


def test_mutated_words_are_caught():
    rng = random.Random(7)
    caught = 0
    for _ in range(300):
        pi = list(range(1, 6))
        rng.shuffle(pi)
        w = pushall_sort(pi)
        if not w:
            continue
        letters = list(w)
        i, j = sorted(rng.sample(range(len(letters)), 2))
        letters[i], letters[j] = letters[j], letters[i]
        mutated = SortingWord(tuple(letters))
        try:
            stack_replay(list(mutated), pi)
            legal = True
        except (AssertionError, IndexError):
            legal = False
        try:
            I, L = slot_drawing(mutated)
        except InvalidWordError:
            continue
        planar = validate_planarity(I, L) == []
        # a legal stack run and a planar slot drawing go together
        if legal:
            assert planar
        else:
            caught += 1
            with pytest.raises(InvalidWordError):
                replay(mutated, pi)
    assert caught > 0


def test_center_buses_from_solver_layouts():
    for k in range(1, 6):
        for pi in permutations(range(1, k + 1)):
            I = diagonal_instance(pi)
            L = solve_bep(I)
            if not L:
                continue
            C = to_center_buses(I, L)
            assert validate_planarity(I, C) == []
            assert is_pushall_word(layout_to_word(I, C), pi)


def test_layout_to_word_rejects_non_center_bus():
    I = diagonal_instance([1])
    from busembed.model import BusLayout

    with pytest.raises(InvalidLayoutError):
        layout_to_word(I, BusLayout({1: 5}))
