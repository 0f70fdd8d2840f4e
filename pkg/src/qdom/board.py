"""Board geometry for the n-by-n queens graph.

Squares are numbered 1..n*n in row-major order: the square in 0-based row r
and column c has index r*n + c + 1.  A queen on a square attacks every square
in its row, column, and both diagonals; the *neighborhood* of a square is the
set of squares a queen there dominates, including the square itself.
"""

from dataclasses import dataclass
from functools import lru_cache

# Names of the 8 symmetries of the square, identity first.  Rotations are
# counterclockwise by 90 degrees: (r, c) -> (c, n-1-r).
TRANSFORMS = (
    "identity",
    "rot90",
    "rot180",
    "rot270",
    "flip_h",
    "flip_v",
    "flip_main",
    "flip_anti",
)

NONTRIVIAL_TRANSFORMS = TRANSFORMS[1:]


@dataclass(frozen=True)
class Board:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"board size must be >= 1, got {self.n}")

    @property
    def num_squares(self) -> int:
        return self.n * self.n

    def index(self, r: int, c: int) -> int:
        if not (0 <= r < self.n and 0 <= c < self.n):
            raise ValueError(f"square ({r}, {c}) outside {self.n}x{self.n} board")
        return r * self.n + c + 1

    def coords(self, i: int) -> tuple[int, int]:
        self._check_square(i)
        return divmod(i - 1, self.n)

    def _check_square(self, i: int):
        if not (1 <= i <= self.num_squares):
            raise ValueError(f"square index {i} outside 1..{self.num_squares}")


def neighborhood(board: Board, i: int) -> tuple[int, ...]:
    """Squares dominated by a queen on square i, including i itself.

    Sorted ascending.  Size is maximal in the center and smallest in the
    corners (3n-2 for n >= 2 corners, larger toward the middle).
    """
    return _neighborhood_cached(board.n, i)


@lru_cache(maxsize=None)
def _neighborhood_cached(n, i):
    board = Board(n)
    r, c = board.coords(i)
    out = set()
    for cc in range(n):
        out.add(r * n + cc + 1)
    for rr in range(n):
        out.add(rr * n + c + 1)
    for dr, dc in ((-1, -1), (-1, 1), (1, -1), (1, 1)):
        rr, cc = r + dr, c + dc
        while 0 <= rr < n and 0 <= cc < n:
            out.add(rr * n + cc + 1)
            rr += dr
            cc += dc
    return tuple(sorted(out))


def apply_symmetry(board: Board, kind: str, i: int) -> int:
    """Image of square i under one of the 8 board symmetries."""
    r, c = board.coords(i)
    m = board.n - 1
    if kind == "identity":
        rr, cc = r, c
    elif kind == "rot90":
        rr, cc = c, m - r
    elif kind == "rot180":
        rr, cc = m - r, m - c
    elif kind == "rot270":
        rr, cc = m - c, r
    elif kind == "flip_h":
        rr, cc = m - r, c
    elif kind == "flip_v":
        rr, cc = r, m - c
    elif kind == "flip_main":
        rr, cc = c, r
    elif kind == "flip_anti":
        rr, cc = m - c, m - r
    else:
        raise ValueError(f"unknown transform {kind!r}")
    return board.index(rr, cc)


def transform_squares(board: Board, kind: str, squares) -> tuple[int, ...]:
    """Image of a square set under a symmetry, sorted ascending."""
    return tuple(sorted(apply_symmetry(board, kind, i) for i in squares))


def orbit(board: Board, squares) -> tuple[tuple[int, ...], ...]:
    """Distinct images of a square set under all 8 symmetries.

    Sorted; length divides 8 (it is the orbit under the dihedral group D4).
    """
    return tuple(sorted({transform_squares(board, t, squares) for t in TRANSFORMS}))


def hilbert_rank(board: Board, i: int) -> int:
    """Rank of square i along a Hilbert curve over the board.

    The board embeds in the smallest 2^k x 2^k grid with k >= 0; square
    (0, 0) has rank 0.  Off-board grid points simply never appear, so ranks
    of board squares are not contiguous unless n is a power of two.
    """
    board._check_square(i)
    r, c = board.coords(i)
    g = 1
    while g < board.n:
        g *= 2
    # Classic iterative xy -> d conversion with quadrant rotation.  The
    # reflection uses the full grid size: high bits are consumed but still
    # present in x and y at later iterations.
    x, y = c, r
    d = 0
    s = g // 2
    while s > 0:
        rx = 1 if x & s else 0
        ry = 1 if y & s else 0
        d += s * s * ((3 * rx) ^ ry)
        if ry == 0:
            if rx == 1:
                x = g - 1 - x
                y = g - 1 - y
            x, y = y, x
        s //= 2
    return d
