"""Assembly of the full domination encoding for one board and bound.

Variable layout: queen variables 1..n^2 (square i true = queen on square i),
then cardinality auxiliaries, then symmetry-breaking auxiliaries.  Emission
order is fixed (coverage clauses by square, cardinality, symmetry), so equal
parameters always produce byte-identical DIMACS output.
"""

from .board import Board, neighborhood
from .cardinality import encode_at_most_k
from .cnf import CnfFormula
from .ordering import order_literals
from .symmetry import add_symmetry_breaking


def domination_clauses(board: Board):
    """One clause per square: some square in its closed neighborhood holds a
    queen.  The clause for square i lists the neighborhood ascending."""
    return [list(neighborhood(board, i)) for i in range(1, board.num_squares + 1)]


def build_encoding(
    board: Board,
    gamma: int,
    *,
    card: str = "mtotalizer",
    order: str = "default",
    seed: int = 0,
    symmetry: bool = True,
    modulus: int | None = None,
) -> CnfFormula:
    """CNF whose models restricted to the queen variables are exactly the
    dominating sets of size <= gamma (one survivor per orbit when symmetry
    breaking is on)."""
    if gamma < 1:
        raise ValueError(f"gamma must be >= 1, got {gamma}")
    f = CnfFormula(num_vars=board.num_squares, queen_vars=board.num_squares)
    for clause in domination_clauses(board):
        f.add_clause(clause)
    lits = order_literals(board, order, seed)
    encode_at_most_k(f, lits, gamma, kind=card, modulus=modulus)
    if symmetry:
        add_symmetry_breaking(f, board)
    return f
