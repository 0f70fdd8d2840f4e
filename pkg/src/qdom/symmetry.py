"""Lex-leader symmetry breaking over the 7 nontrivial board symmetries.

For each nontrivial transform t the constraint X <= Y is added, where X is
the queen vector Q(1)..Q(N) in square order and Y is Q(t(1))..Q(t(N)).
Together these keep exactly one member per orbit: the one whose row-major
characteristic bitvector is lexicographically smallest.
"""

from .board import NONTRIVIAL_TRANSFORMS, apply_symmetry, transform_squares


def encode_lex_leq(f, xs, ys):
    """Add clauses forcing the vector xs to be lexicographically <= ys.

    Uses a chain a_0..a_N of fresh variables where a_i means "the first i
    positions are equal and the order is still undecided".  Exactly 3N
    ternary clauses plus the two unit clauses a_0 and a_N; the chain is
    one-directional but a_N is asserted, which makes strict x > y prefixes
    contradictory and leaves equal or smaller vectors extendable.
    """
    if len(xs) != len(ys):
        raise ValueError("vectors differ in length")
    if not xs:
        raise ValueError("empty vectors")
    n = len(xs)
    a = f.new_vars(n + 1)
    f.add_clause([a[0]])
    f.add_clause([a[n]])
    for i in range(n):
        f.add_clause([a[i + 1], ys[i], -a[i]])
        f.add_clause([a[i + 1], -xs[i], -a[i]])
        f.add_clause([ys[i], -xs[i], -a[i]])
    return a


def add_symmetry_breaking(f, board):
    """Lex-leader constraints for all 7 nontrivial symmetries, in the fixed
    TRANSFORMS order.  Adds 7*(3*n^2 + 2) clauses and 7*(n^2 + 1) variables."""
    n2 = board.num_squares
    xs = list(range(1, n2 + 1))
    for t in NONTRIVIAL_TRANSFORMS:
        ys = [apply_symmetry(board, t, i) for i in xs]
        encode_lex_leq(f, xs, ys)


def bitvector_key(board, squares):
    """Row-major characteristic vector of a square set, as a tuple of 0/1.
    Comparing these tuples is the order in which symmetry breaking keeps
    orbit members (smallest survives)."""
    chi = [0] * board.num_squares
    for s in squares:
        chi[s - 1] = 1
    return tuple(chi)


def lex_min_member(board, squares):
    """The orbit member with the smallest characteristic bitvector."""
    from .board import orbit

    return min(orbit(board, squares), key=lambda m: bitvector_key(board, m))


def is_lex_min(board, squares) -> bool:
    key = bitvector_key(board, squares)
    return all(
        key <= bitvector_key(board, transform_squares(board, t, squares))
        for t in NONTRIVIAL_TRANSFORMS
    )
