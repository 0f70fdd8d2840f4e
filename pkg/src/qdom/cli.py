"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 integrity failure (a check that
should have passed did not), 3 gave up (timeout / budget / unknown).  The
`solve` subcommand is the exception: it exits 10 for satisfiable and 20 for
unsatisfiable like a conventional DIMACS solver, so it can itself be driven
through the external-solver adapter.

An external solver is used when --solver is given or QDOM_SOLVER is set;
otherwise the embedded solver runs.  All commands are deterministic given
their flags and seed, except wall-clock columns.
"""

import argparse
import os
import sys

from .board import Board
from .cardinality import ENCODERS
from .cnf import parse_cubes, parse_dimacs, to_dimacs, to_icnf
from .cube import conquer, split
from .encoding import build_encoding
from .enumeration import (
    PartialEnumerationError,
    enumerate_classes,
    find_frequency_violation,
    find_gamma,
    frequency_matrix,
    read_solutions,
    verify_solution_rows,
    completeness_formula,
    decode_queens,
    write_heatmap,
    write_solutions,
)
from .oracle import MAX_ORACLE_N, all_min_sets, min_domination_number
from .ordering import ORDERINGS
from .solver import (
    EmbeddedBackend,
    ExternalBackend,
    ExternalSolverConfig,
    IntegrityError,
    run_external,
    solve_formula,
)
from .enumeration import class_of


def _add_encoding_flags(p, symmetry_default="on", with_symmetry=True):
    p.add_argument("--card", choices=ENCODERS, default="mtotalizer", help="cardinality encoder")
    p.add_argument("--order", choices=ORDERINGS, default="default", help="literal ordering")
    p.add_argument("--seed", type=int, default=0, help="seed for --order random")
    p.add_argument("--modulus", type=int, default=None, help="mtotalizer modulus override")
    if with_symmetry:
        p.add_argument("--symmetry", choices=("on", "off"), default=symmetry_default)


def _add_solver_flags(p):
    p.add_argument(
        "--solver",
        default=None,
        help="external DIMACS solver executable (default: $QDOM_SOLVER, else embedded)",
    )
    p.add_argument(
        "--solver-arg",
        action="append",
        default=[],
        dest="solver_args",
        help="extra argument passed to the external solver (repeatable)",
    )
    p.add_argument("--timeout", type=float, default=None, help="time budget in seconds")
    p.add_argument(
        "--conflicts", type=int, default=None, help="embedded solver conflict budget"
    )


def _solver_exe(args):
    return args.solver or os.environ.get("QDOM_SOLVER") or None


def _external_cfg(args, proof=None):
    exe = _solver_exe(args)
    if not exe:
        return None
    return ExternalSolverConfig(
        executable=exe,
        args=tuple(args.solver_args),
        proof_path=proof,
        timeout=args.timeout,
    )


def _backend(args):
    cfg = _external_cfg(args)
    if cfg is not None:
        return ExternalBackend(cfg)
    return EmbeddedBackend(conflict_limit=args.conflicts, time_limit=args.timeout)


def _backend_factory(args):
    cfg = _external_cfg(args)
    if cfg is not None:
        return lambda: ExternalBackend(cfg)
    return lambda: EmbeddedBackend(conflict_limit=args.conflicts, time_limit=args.timeout)


def _symmetry_on(args):
    return getattr(args, "symmetry", "on") == "on"


def _resolve_gamma(args, board):
    if getattr(args, "gamma", None) is not None:
        if args.gamma < 1:
            raise ValueError("--gamma must be >= 1")
        return args.gamma
    if getattr(args, "gamma_upper", None) is not None:
        return find_gamma(
            board,
            args.gamma_upper,
            card=args.card,
            order=args.order,
            seed=args.seed,
            symmetry=_symmetry_on(args),
            modulus=args.modulus,
            backend_factory=_backend_factory(args),
        )
    if board.n <= MAX_ORACLE_N:
        return min_domination_number(board)
    raise ValueError(f"n={board.n} is beyond the oracle: pass --gamma or --gamma-upper")


# -- subcommands -----------------------------------------------------------


def cmd_encode(args):
    board = Board(args.n)
    f = build_encoding(
        board,
        args.gamma,
        card=args.card,
        order=args.order,
        seed=args.seed,
        symmetry=_symmetry_on(args),
        modulus=args.modulus,
    )
    with open(args.output, "w") as fp:
        fp.write(to_dimacs(f))
    print(
        f"# n={args.n} gamma={args.gamma} card={args.card} order={args.order}"
        f" symmetry={args.symmetry} vars={f.num_vars} clauses={f.num_clauses}"
        f" path={args.output}"
    )
    return 0


def cmd_solve(args):
    cfg = _external_cfg(args, proof=args.proof)
    if args.proof and cfg is None:
        raise ValueError("--proof needs an external solver")
    if cfg is not None:
        res = run_external(args.cnf, cfg)
    else:
        with open(args.cnf) as fp:
            f = parse_dimacs(fp.read())
        res = solve_formula(
            f, conflict_limit=args.conflicts, time_limit=args.timeout
        )
    if res.status == "sat":
        print("s SATISFIABLE")
        lits = res.model
        for i in range(0, len(lits), 20):
            chunk = lits[i : i + 20]
            end = " 0" if i + 20 >= len(lits) else ""
            print("v " + " ".join(map(str, chunk)) + end)
        return 10
    if res.status == "unsat":
        print("s UNSATISFIABLE")
        return 20
    if res.detail:
        print(f"c {res.detail}")
    print("s UNKNOWN")
    return 3


def cmd_enumerate(args):
    board = Board(args.n)
    gamma = _resolve_gamma(args, board)
    backend = _backend(args)
    classes = enumerate_classes(
        board,
        gamma,
        card=args.card,
        order=args.order,
        seed=args.seed,
        symmetry=_symmetry_on(args),
        modulus=args.modulus,
        backend=backend,
    )
    fm = frequency_matrix(board, classes)
    violation = find_frequency_violation(board, fm)
    print(
        f"# n={args.n} gamma={gamma} classes={len(classes)} labeled={fm.total}"
        f" backend={backend.name}"
    )
    if violation is None:
        print("# frequency_symmetry=pass")
    else:
        print(f"# frequency_symmetry=fail transform={violation[0]} square={violation[1]}")
    print("orbit_size\tsquares")
    for cls in classes:
        print(f"{cls.orbit_size}\t{' '.join(map(str, cls.canonical))}")
    if args.solutions:
        with open(args.solutions, "w") as fp:
            write_solutions(fp, board, gamma, classes)
    if args.heatmap:
        with open(args.heatmap, "w") as fp:
            write_heatmap(fp, fm)
    if violation is not None:
        print("error: frequency matrix is not symmetric", file=sys.stderr)
        return 2
    return 0


def cmd_oracle(args):
    board = Board(args.n)
    gamma = min_domination_number(board)
    sets = all_min_sets(board, gamma)
    canonicals = {class_of(board, s).canonical for s in sets}
    print("n\tgamma\tlabeled\tclasses")
    print(f"{args.n}\t{gamma}\t{len(sets)}\t{len(canonicals)}")
    return 0


def cmd_bench(args):
    if args.n_min < 2 or args.n_max < args.n_min:
        raise ValueError("need 2 <= n-min <= n-max")
    cards = args.cards.split(",") if args.cards else list(ENCODERS)
    orders = args.orders.split(",") if args.orders else list(ORDERINGS)
    for c in cards:
        if c not in ENCODERS:
            raise ValueError(f"unknown encoder {c!r}")
    for o in orders:
        if o not in ORDERINGS:
            raise ValueError(f"unknown ordering {o!r}")
    gamma_map = {}
    for item in args.gamma or []:
        name, _, val = item.partition("=")
        gamma_map[int(name)] = int(val)
    import time as _time

    print("n\tqueens\tcard\torder\tvars\tclauses\tstatus\tseconds\tconflicts")
    for n in range(args.n_min, args.n_max + 1):
        board = Board(n)
        if n in gamma_map:
            gamma = gamma_map[n]
        elif n <= MAX_ORACLE_N:
            gamma = min_domination_number(board)
        else:
            raise ValueError(f"n={n} is beyond the oracle: pass --gamma {n}=<value>")
        k = gamma - 1
        if k < 1:
            continue
        for card in cards:
            for order in orders:
                f = build_encoding(
                    board,
                    k,
                    card=card,
                    order=order,
                    seed=args.seed,
                    symmetry=_symmetry_on(args),
                    modulus=args.modulus,
                )
                backend = _backend_factory(args)()
                t0 = _time.perf_counter()
                res = backend.solve(f)
                dt = _time.perf_counter() - t0
                print(
                    f"{n}\t{k}\t{card}\t{order}\t{f.num_vars}\t{f.num_clauses}"
                    f"\t{res.status}\t{dt:.2f}\t{res.stats.conflicts}"
                )
    return 0


def cmd_cube(args):
    board = Board(args.n)
    gamma = _resolve_gamma(args, board)
    if (args.depth is None) == (args.cubes is None):
        raise ValueError("pass exactly one of --depth or --cubes")
    if args.cubes:
        with open(args.cubes) as fp:
            cubes = parse_cubes(fp.read())
    else:
        cubes = split(board, args.depth)
    symmetry = _symmetry_on(args)
    if args.emit_icnf:
        f = build_encoding(
            board,
            gamma,
            card=args.card,
            order=args.order,
            seed=args.seed,
            symmetry=symmetry,
            modulus=args.modulus,
        )
        with open(args.emit_icnf, "w") as fp:
            fp.write(to_icnf(f, cubes))
        print(
            f"# n={args.n} gamma={gamma} cubes={len(cubes)} vars={f.num_vars}"
            f" clauses={f.num_clauses} path={args.emit_icnf}"
        )
        return 0
    result = conquer(
        board,
        gamma,
        cubes,
        mode=args.mode,
        workers=args.workers,
        card=args.card,
        order=args.order,
        seed=args.seed,
        symmetry=symmetry,
        modulus=args.modulus,
        external_cfg=_external_cfg(args),
        conflict_limit=args.conflicts,
        time_limit=args.timeout,
    )
    print("cube\tassumptions\tstatus\tseconds\tfound")
    for o in result.outcomes:
        found = len(o.classes) if args.mode == "enumerate" else (1 if o.status == "sat" else 0)
        print(
            f"{o.index}\t{' '.join(map(str, o.cube))}\t{o.status}\t{o.seconds:.2f}\t{found}"
        )
    if args.mode == "decide":
        line = f"# n={args.n} gamma={gamma} cubes={len(result.outcomes)} status={result.status}"
        if result.model:
            line += f" witness={' '.join(map(str, result.model))}"
        print(line)
    else:
        labeled = sum(c.orbit_size for c in result.classes)
        print(
            f"# n={args.n} gamma={gamma} cubes={len(result.outcomes)}"
            f" status={result.status} classes={len(result.classes)} labeled={labeled}"
        )
    return 3 if result.status == "unknown" else 0


def cmd_verify(args):
    with open(args.solutions) as fp:
        n, gamma, rows = read_solutions(fp)
    board = Board(n)
    classes = verify_solution_rows(board, gamma, rows)
    labeled = sum(c.orbit_size for c in classes)
    complete = "not-checked"
    if args.complete:
        f = completeness_formula(
            board,
            gamma,
            classes,
            card=args.card,
            order=args.order,
            seed=args.seed,
            modulus=args.modulus,
        )
        res = _backend(args).solve(f)
        if res.status == "sat":
            missing = decode_queens(board, res.model)
            raise IntegrityError(f"solution file is incomplete: found unlisted {missing}")
        if res.status == "unknown":
            print(f"c {res.detail}")
            print("# verify=unknown")
            return 3
        complete = "yes"
    print(f"# verify=pass n={n} gamma={gamma} rows={len(classes)} labeled={labeled} complete={complete}")
    return 0


def cmd_heatmap(args):
    board = Board(args.n)
    gamma = _resolve_gamma(args, board)
    classes = enumerate_classes(
        board,
        gamma,
        card=args.card,
        order=args.order,
        seed=args.seed,
        symmetry=_symmetry_on(args),
        modulus=args.modulus,
        backend=_backend(args),
    )
    fm = frequency_matrix(board, classes)
    violation = find_frequency_violation(board, fm)
    with open(args.output, "w") as fp:
        write_heatmap(fp, fm)
    status = "pass" if violation is None else f"fail transform={violation[0]} square={violation[1]}"
    print(
        f"# n={args.n} gamma={gamma} labeled={fm.total} sum={fm.count_sum()}"
        f" frequency_symmetry={status} path={args.output}"
    )
    return 2 if violation is not None else 0


# -- parser ----------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qdom",
        description="Minimum dominating sets of queens, enumerated up to symmetry.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="write the CNF encoding to a DIMACS file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=int, required=True)
    _add_encoding_flags(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("solve", help="solve a DIMACS file (exit 10 sat / 20 unsat)")
    p.add_argument("cnf")
    _add_solver_flags(p)
    p.add_argument("--proof", default=None, help="proof output path (external solver only)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("enumerate", help="enumerate solution classes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=int, default=None)
    p.add_argument("--gamma-upper", type=int, default=None, dest="gamma_upper")
    _add_encoding_flags(p)
    _add_solver_flags(p)
    p.add_argument("--solutions", default=None, help="write a solutions file")
    p.add_argument("--heatmap", default=None, help="write a frequency-matrix CSV")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("oracle", help="brute-force gamma and counts (small n)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="time gamma-1 refutations per encoder/ordering")
    p.add_argument("--n-min", type=int, required=True, dest="n_min")
    p.add_argument("--n-max", type=int, required=True, dest="n_max")
    p.add_argument("--cards", default=None, help="comma-separated encoders")
    p.add_argument("--orders", default=None, help="comma-separated orderings")
    p.add_argument(
        "--gamma",
        action="append",
        default=None,
        help="known gamma as N=G (repeatable), for n beyond the oracle",
    )
    _add_encoding_flags(p, symmetry_default="off")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("cube", help="split into cubes and conquer, or emit iCNF")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=int, default=None)
    p.add_argument("--gamma-upper", type=int, default=None, dest="gamma_upper")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--cubes", default=None, help="read cubes from an iCNF file")
    p.add_argument("--mode", choices=("decide", "enumerate"), default="decide")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--emit-icnf", default=None, dest="emit_icnf")
    _add_encoding_flags(p)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_cube)

    p = sub.add_parser("verify", help="check a solutions file")
    p.add_argument("solutions")
    p.add_argument("--complete", action="store_true")
    _add_encoding_flags(p, with_symmetry=False)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("heatmap", help="enumerate and write the frequency CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=int, default=None)
    p.add_argument("--gamma-upper", type=int, default=None, dest="gamma_upper")
    _add_encoding_flags(p)
    _add_solver_flags(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_heatmap)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors; usage errors are 1 here
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except PartialEnumerationError as exc:
        print(f"error: gave up: {exc.detail}", file=sys.stderr)
        return 3
    except IntegrityError as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
