"""Cube-and-conquer: split the queen-variable space into 2^depth cubes and
solve or enumerate each cube independently, then merge.

The split branches on the first `depth` queen variables in occurrence order
(most-constraining squares first).  Cubes are all sign combinations, so they
partition the assignment space: decision results AND together (unsat iff
every cube is unsat) and enumeration results union, deduplicated by
canonical form because the same class can surface in several cubes when
symmetry breaking is off.
"""

import time
from dataclasses import dataclass
from itertools import product
from multiprocessing import Pool

from .board import Board
from .encoding import build_encoding
from .enumeration import PartialEnumerationError, decode_queens, enumerate_classes
from .oracle import is_dominating
from .ordering import order_literals
from .solver import EmbeddedBackend, ExternalBackend, IntegrityError


def split(board: Board, depth: int) -> list:
    """2^depth cubes over the first `depth` queen variables in occurrence
    order.  Cube 0 is all-positive; the last variable flips fastest."""
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if depth > board.num_squares:
        raise ValueError(f"depth {depth} exceeds {board.num_squares} queen variables")
    branch = order_literals(board, "occurrence")[:depth]
    return [tuple(s * v for v, s in zip(branch, signs)) for signs in product((1, -1), repeat=depth)]


@dataclass(frozen=True)
class CubeOutcome:
    index: int
    cube: tuple
    status: str  # sat | unsat | unknown (decide), done | unknown (enumerate)
    seconds: float
    classes: tuple = ()
    detail: str = ""


@dataclass(frozen=True)
class ConquerResult:
    mode: str
    status: str
    outcomes: tuple
    classes: tuple = ()  # merged, enumerate mode
    model: tuple = ()  # queen squares of some sat cube, decide mode


def _run_cube(task):
    (n, gamma, card, order, seed, symmetry, modulus, mode, index, cube, cfg, limits) = task
    board = Board(n)
    conflict_limit, time_limit = limits
    start = time.perf_counter()
    if mode == "decide":
        backend = (
            ExternalBackend(cfg)
            if cfg is not None
            else EmbeddedBackend(conflict_limit=conflict_limit, time_limit=time_limit)
        )
        f = build_encoding(
            board, gamma, card=card, order=order, seed=seed, symmetry=symmetry, modulus=modulus
        )
        res = backend.solve(f, cube)
        queens = ()
        if res.status == "sat":
            queens = decode_queens(board, res.model)
            if not is_dominating(board, queens):
                raise IntegrityError(f"cube {index}: model {queens} does not dominate")
        return CubeOutcome(
            index=index,
            cube=cube,
            status=res.status,
            seconds=time.perf_counter() - start,
            classes=(queens,) if queens else (),
            detail=res.detail,
        )
    backend = (
        ExternalBackend(cfg)
        if cfg is not None
        else EmbeddedBackend(conflict_limit=conflict_limit, time_limit=time_limit)
    )
    try:
        classes = enumerate_classes(
            board,
            gamma,
            card=card,
            order=order,
            seed=seed,
            symmetry=symmetry,
            modulus=modulus,
            backend=backend,
            assumptions=cube,
        )
        status, detail = "done", ""
    except PartialEnumerationError as exc:
        classes, status, detail = exc.classes, "unknown", exc.detail
    return CubeOutcome(
        index=index,
        cube=cube,
        status=status,
        seconds=time.perf_counter() - start,
        classes=tuple(classes),
        detail=detail,
    )


def conquer(
    board: Board,
    gamma: int,
    cubes,
    *,
    mode: str = "decide",
    workers: int = 1,
    card: str = "mtotalizer",
    order: str = "default",
    seed: int = 0,
    symmetry: bool = True,
    modulus: int | None = None,
    external_cfg=None,
    conflict_limit=None,
    time_limit=None,
) -> ConquerResult:
    """Run every cube, then merge.  Decision: sat if any cube is sat, unsat
    only if all are unsat, otherwise unknown.  Enumeration: union of class
    lists keyed by canonical form; any unknown cube makes the whole result
    unknown (partial classes are still returned)."""
    if mode not in ("decide", "enumerate"):
        raise ValueError(f"unknown mode {mode!r}")
    cubes = [tuple(c) for c in cubes]
    if not cubes:
        raise ValueError("no cubes")
    tasks = [
        (
            board.n,
            gamma,
            card,
            order,
            seed,
            symmetry,
            modulus,
            mode,
            i,
            cube,
            external_cfg,
            (conflict_limit, time_limit),
        )
        for i, cube in enumerate(cubes)
    ]
    if workers <= 1 or len(cubes) == 1:
        outcomes = [_run_cube(t) for t in tasks]
    else:
        with Pool(processes=min(workers, len(cubes))) as pool:
            outcomes = pool.map(_run_cube, tasks, chunksize=1)
    outcomes = tuple(outcomes)
    if mode == "decide":
        model = ()
        for o in outcomes:
            if o.status == "sat" and o.classes:
                model = o.classes[0]
                break
        if any(o.status == "sat" for o in outcomes):
            status = "sat"
        elif any(o.status == "unknown" for o in outcomes):
            status = "unknown"
        else:
            status = "unsat"
        return ConquerResult(mode=mode, status=status, outcomes=outcomes, model=model)
    merged = {}
    for o in outcomes:
        for cls in o.classes:
            merged.setdefault(cls.canonical, cls)
    status = "unknown" if any(o.status == "unknown" for o in outcomes) else "done"
    classes = tuple(sorted(merged.values(), key=lambda c: c.canonical))
    return ConquerResult(mode=mode, status=status, outcomes=outcomes, classes=classes)
