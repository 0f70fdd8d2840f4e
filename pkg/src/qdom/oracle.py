"""Brute-force ground truth for queen domination, independent of the SAT
path.  Shares only the board geometry with the rest of the package, so its
answers certify the encoder/solver pipeline.

Everything here works on coverage bitmasks (bit i-1 = square i) and walks
combinations in lexicographic order, skipping a prefix when the uncovered
squares already exceed what the remaining picks could possibly cover.
"""

from functools import lru_cache

from .board import Board, neighborhood

# Exhaustive search is meant for small boards; 8 is already a longer run.
MAX_ORACLE_N = 8


class BoundExceededError(Exception):
    """No dominating set exists within the requested size bound."""


@lru_cache(maxsize=None)
def _masks(n):
    board = Board(n)
    masks = [0] * (board.num_squares + 1)
    for i in range(1, board.num_squares + 1):
        m = 0
        for j in neighborhood(board, i):
            m |= 1 << (j - 1)
        masks[i] = m
    return tuple(masks)


def is_dominating(board: Board, squares) -> bool:
    """True iff every square is covered by some queen in `squares`."""
    masks = _masks(board.n)
    covered = 0
    for s in squares:
        board._check_square(s)
        covered |= masks[s]
    return covered == (1 << board.num_squares) - 1


def _check_small(board):
    if board.n > MAX_ORACLE_N:
        raise ValueError(f"oracle is exhaustive and limited to n <= {MAX_ORACLE_N}")


def _exists_dominating(board, k):
    n2 = board.num_squares
    masks = _masks(board.n)
    full = (1 << n2) - 1
    maxnb = max(m.bit_count() for m in masks[1:])

    def dfs(start, depth, covered):
        if covered == full:
            return True
        if depth == k:
            return False
        rem = k - depth
        if (full & ~covered).bit_count() > rem * maxnb:
            return False
        for i in range(start, n2 - rem + 2):
            if dfs(i + 1, depth + 1, covered | masks[i]):
                return True
        return False

    return dfs(1, 0, 0)


def min_domination_number(board: Board, max_k=None) -> int:
    """Smallest k such that k queens dominate the board, by exhaustive
    search from k = 1 upward."""
    _check_small(board)
    limit = board.num_squares if max_k is None else max_k
    for k in range(1, limit + 1):
        if _exists_dominating(board, k):
            return k
    raise BoundExceededError(f"no dominating set of size <= {limit} on {board.n}x{board.n}")


def all_min_sets(board: Board, gamma=None) -> list:
    """Every dominating set of exactly the minimum size, sorted.  Exhaustive;
    quick through n = 7, noticeably slower at n = 8."""
    _check_small(board)
    if gamma is None:
        gamma = min_domination_number(board)
    n2 = board.num_squares
    masks = _masks(board.n)
    full = (1 << n2) - 1
    maxnb = max(m.bit_count() for m in masks[1:])
    out = []
    chosen = []

    def dfs(start, covered):
        depth = len(chosen)
        if depth == gamma:
            if covered == full:
                out.append(tuple(chosen))
            return
        rem = gamma - depth
        if (full & ~covered).bit_count() > rem * maxnb:
            return
        for i in range(start, n2 - rem + 2):
            chosen.append(i)
            dfs(i + 1, covered | masks[i])
            chosen.pop()

    dfs(1, 0)
    return out
