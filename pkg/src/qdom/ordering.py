"""Orderings of the queen variables fed to the cardinality encoder.

The encoding never changes which variables exist, only the sequence in which
the at-most-k constraint consumes them.  All four strategies are pure
functions of (board, seed).
"""

import random

from .board import Board, hilbert_rank, neighborhood

ORDERINGS = ("default", "random", "occurrence", "hilbert")


def order_literals(board: Board, kind: str = "default", seed: int = 0) -> list[int]:
    """Queen variables 1..n*n as a permutation chosen by `kind`.

    default: ascending index.
    random: seeded Fisher-Yates shuffle; identical across platforms because it
        only draws randrange values from random.Random(seed).
    occurrence: descending neighborhood size, ties by ascending index.
    hilbert: ascending Hilbert-curve rank.
    """
    squares = list(range(1, board.num_squares + 1))
    if kind == "default":
        return squares
    if kind == "random":
        rng = random.Random(seed)
        for i in range(len(squares) - 1, 0, -1):
            j = rng.randrange(i + 1)
            squares[i], squares[j] = squares[j], squares[i]
        return squares
    if kind == "occurrence":
        return sorted(squares, key=lambda i: (-len(neighborhood(board, i)), i))
    if kind == "hilbert":
        return sorted(squares, key=lambda i: hilbert_rank(board, i))
    raise ValueError(f"unknown ordering {kind!r}")
