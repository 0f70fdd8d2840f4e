"""Enumeration of minimum dominating sets up to board symmetry.

The enumerator repeatedly solves the encoding, verifies each model against
the brute-force domination check, maps it to its symmetry class, and blocks
the entire orbit with one clause per member (queen variables only, so every
later solution differs on the board, not just on auxiliaries).  Blocking the
whole orbit keeps the loop correct whether or not symmetry breaking is on;
with it on, at most 7 of the 8 clauses per class are redundant.
"""

from dataclasses import dataclass

from .board import Board, TRANSFORMS, apply_symmetry, orbit
from .encoding import build_encoding
from .oracle import is_dominating
from .solver import EmbeddedBackend, IntegrityError


class PartialEnumerationError(Exception):
    """Enumeration hit a budget before exhausting the space.  Carries the
    classes found so far."""

    def __init__(self, classes, detail):
        super().__init__(detail)
        self.classes = classes
        self.detail = detail


@dataclass(frozen=True)
class SolutionClass:
    canonical: tuple
    members: tuple

    @property
    def orbit_size(self) -> int:
        return len(self.members)


def canonical_form(board: Board, squares) -> tuple:
    """Smallest sorted index sequence among the 8 symmetric images; the
    class key."""
    return orbit(board, squares)[0]


def class_of(board: Board, squares) -> SolutionClass:
    members = orbit(board, squares)
    return SolutionClass(canonical=members[0], members=members)


def decode_queens(board: Board, model) -> tuple:
    return tuple(v for v in range(1, board.num_squares + 1) if model[v - 1] > 0)


def domination_lower_bound(n: int) -> int:
    """ceil((n-1)/2), and at least 1 on a nonempty board."""
    return max(1, n // 2)


def enumerate_classes(
    board: Board,
    gamma: int,
    *,
    card: str = "mtotalizer",
    order: str = "default",
    seed: int = 0,
    symmetry: bool = True,
    modulus: int | None = None,
    backend=None,
    assumptions=(),
) -> list:
    """All symmetry classes of dominating sets of size <= gamma, sorted by
    canonical form.  With `assumptions` set (cube literals), only solutions
    inside that cube are found; merging over a full cube set restores the
    complete answer."""
    if backend is None:
        backend = EmbeddedBackend()
    f = build_encoding(
        board, gamma, card=card, order=order, seed=seed, symmetry=symmetry, modulus=modulus
    )
    classes = {}
    while True:
        res = backend.solve(f, assumptions)
        if res.status == "unsat":
            break
        if res.status == "unknown":
            raise PartialEnumerationError(
                sorted(classes.values(), key=lambda c: c.canonical), res.detail
            )
        queens = decode_queens(board, res.model)
        if len(queens) > gamma:
            raise IntegrityError(
                f"model places {len(queens)} queens, bound was {gamma}: cardinality encoding broken"
            )
        if not is_dominating(board, queens):
            raise IntegrityError(f"model {queens} is not a dominating set")
        cls = class_of(board, queens)
        if cls.canonical in classes:
            raise IntegrityError(f"class {cls.canonical} found twice: orbit blocking broken")
        classes[cls.canonical] = cls
        for member in cls.members:
            f.add_clause([-s for s in member])
    return sorted(classes.values(), key=lambda c: c.canonical)


def find_gamma(
    board: Board,
    upper: int,
    *,
    card: str = "mtotalizer",
    order: str = "default",
    seed: int = 0,
    symmetry: bool = True,
    modulus: int | None = None,
    backend_factory=None,
) -> int:
    """Minimum domination number by descending SAT probes from `upper`,
    stopping early at the proven lower bound.  `upper` must itself admit a
    solution."""
    if backend_factory is None:
        backend_factory = EmbeddedBackend
    lower = domination_lower_bound(board.n)

    def probe(k):
        f = build_encoding(
            board, k, card=card, order=order, seed=seed, symmetry=symmetry, modulus=modulus
        )
        return backend_factory().solve(f)

    res = probe(upper)
    if res.status == "unsat":
        raise ValueError(f"no dominating set of size <= {upper} on {board.n}x{board.n}")
    if res.status == "unknown":
        raise PartialEnumerationError([], res.detail)
    best = min(upper, len(decode_queens(board, res.model)))
    while best > lower:
        res = probe(best - 1)
        if res.status == "unsat":
            return best
        if res.status == "unknown":
            raise PartialEnumerationError([], res.detail)
        best = min(best - 1, len(decode_queens(board, res.model)))
    return best


# -- frequency matrix ------------------------------------------------------


@dataclass(frozen=True)
class FrequencyMatrix:
    n: int
    counts: tuple  # n rows of n ints
    total: int  # number of labeled solutions counted

    def count_sum(self) -> int:
        return sum(sum(row) for row in self.counts)


def frequency_matrix(board: Board, classes) -> FrequencyMatrix:
    """Exact per-square occupation counts over all labeled solutions (every
    member of every class).  The counts sum to gamma * total."""
    n = board.n
    counts = [[0] * n for _ in range(n)]
    total = 0
    for cls in classes:
        for member in cls.members:
            total += 1
            for s in member:
                r, c = board.coords(s)
                counts[r][c] += 1
    return FrequencyMatrix(n=n, counts=tuple(tuple(row) for row in counts), total=total)


def find_frequency_violation(board: Board, fm: FrequencyMatrix):
    """First (transform, square) whose count differs from its image's count,
    or None when the matrix is invariant under all 8 symmetries.  Exact
    integer comparison."""
    for t in TRANSFORMS:
        for i in range(1, board.num_squares + 1):
            j = apply_symmetry(board, t, i)
            r, c = board.coords(i)
            rr, cc = board.coords(j)
            if fm.counts[r][c] != fm.counts[rr][cc]:
                return (t, i)
    return None


def write_heatmap(fp, fm: FrequencyMatrix):
    for row in fm.counts:
        fp.write(",".join(map(str, row)) + "\n")
    fp.write(f"total,{fm.total}\n")


# -- solutions file --------------------------------------------------------


def write_solutions(fp, board: Board, gamma: int, classes):
    """One line per class: `n gamma orbit_size sq1 .. sq_gamma` with the
    canonical member's squares ascending."""
    for cls in classes:
        fields = [board.n, gamma, cls.orbit_size, *cls.canonical]
        fp.write(" ".join(map(str, fields)) + "\n")


def read_solutions(fp):
    """Parse a solutions file back into (n, gamma, [(orbit_size, squares)]).
    Blank lines and `#` comments are tolerated."""
    n = gamma = None
    rows = []
    for lineno, raw in enumerate(fp, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 4:
            raise ValueError(f"line {lineno}: expected `n gamma orbit_size squares...`")
        vals = [int(p) for p in parts]
        if n is None:
            n, gamma = vals[0], vals[1]
        elif (vals[0], vals[1]) != (n, gamma):
            raise ValueError(f"line {lineno}: inconsistent n/gamma")
        size, squares = vals[2], tuple(vals[3:])
        if len(squares) != gamma:
            raise ValueError(f"line {lineno}: {len(squares)} squares, gamma is {gamma}")
        rows.append((size, squares))
    if n is None:
        raise ValueError("no solution rows found")
    return n, gamma, rows


def verify_solution_rows(board: Board, gamma: int, rows):
    """Recompute everything checkable about parsed solution rows: domination,
    orbit size, canonical minimality, class uniqueness.  Returns the rows as
    SolutionClass objects or raises IntegrityError."""
    classes = []
    seen = set()
    for size, squares in rows:
        if len(set(squares)) != len(squares):
            raise IntegrityError(f"row {squares}: repeated squares")
        if not is_dominating(board, squares):
            raise IntegrityError(f"row {squares}: not a dominating set")
        cls = class_of(board, squares)
        if cls.canonical != tuple(sorted(squares)):
            raise IntegrityError(f"row {squares}: not the canonical orbit member")
        if cls.orbit_size != size:
            raise IntegrityError(
                f"row {squares}: orbit size {cls.orbit_size}, file says {size}"
            )
        if cls.canonical in seen:
            raise IntegrityError(f"row {squares}: duplicate class")
        seen.add(cls.canonical)
        classes.append(cls)
    return classes


def completeness_formula(
    board: Board,
    gamma: int,
    classes,
    *,
    card: str = "mtotalizer",
    order: str = "default",
    seed: int = 0,
    modulus: int | None = None,
):
    """The base encoding (no symmetry breaking) plus one blocking clause per
    labeled solution.  Unsatisfiable exactly when the class list covers every
    dominating set of size <= gamma."""
    f = build_encoding(
        board, gamma, card=card, order=order, seed=seed, symmetry=False, modulus=modulus
    )
    for cls in classes:
        for member in cls.members:
            f.add_clause([-s for s in member])
    return f
