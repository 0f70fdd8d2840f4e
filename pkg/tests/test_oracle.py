import pytest

from qdom.board import Board, orbit
from qdom.oracle import (
    MAX_ORACLE_N,
    BoundExceededError,
    all_min_sets,
    is_dominating,
    min_domination_number,
)

# minimum queens needed to dominate, exhaustively verified
KNOWN_GAMMA = {1: 1, 2: 1, 3: 1, 4: 2, 5: 3, 6: 3, 7: 4}


def test_is_dominating_hand_cases():
    b = Board(3)
    assert is_dominating(b, (5,))  # center queen sees the whole 3x3 board
    assert not is_dominating(b, (1,))  # corner misses 6 and 8
    assert not is_dominating(b, ())
    assert is_dominating(b, (1, 5))
    with pytest.raises(ValueError):
        is_dominating(b, (10,))


def test_is_dominating_full_row_always_works():
    for n in (2, 4, 6):
        b = Board(n)
        assert is_dominating(b, tuple(range(1, n + 1)))  # queens across row 0


def test_known_gamma_values():
    for n, g in KNOWN_GAMMA.items():
        assert min_domination_number(Board(n)) == g


def test_min_domination_number_bound():
    with pytest.raises(BoundExceededError):
        min_domination_number(Board(4), max_k=1)


def test_oracle_size_limit():
    big = Board(MAX_ORACLE_N + 1)
    with pytest.raises(ValueError):
        min_domination_number(big)
    with pytest.raises(ValueError):
        all_min_sets(big)


def test_all_min_sets_small():
    b = Board(3)
    assert all_min_sets(b) == [(5,)]
    sets4 = all_min_sets(Board(4))
    assert len(sets4) == 12
    assert all(len(s) == 2 for s in sets4)


def test_all_min_sets_are_sorted_distinct_dominating():
    for n in (4, 5, 6):
        b = Board(n)
        sets = all_min_sets(b)
        assert sets == sorted(set(sets))
        assert all(is_dominating(b, s) for s in sets)
        assert all(list(s) == sorted(set(s)) for s in sets)


def test_all_min_sets_closed_under_symmetry():
    b = Board(5)
    found = set(all_min_sets(b))
    for s in found:
        assert set(orbit(b, s)) <= found


def test_all_min_sets_respects_explicit_gamma():
    # passing a larger bound enumerates larger sets too
    b = Board(3)
    pairs = all_min_sets(b, gamma=2)
    assert all(len(s) == 2 for s in pairs)
    assert (1, 5) in pairs
