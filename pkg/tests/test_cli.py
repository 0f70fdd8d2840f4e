import subprocess
import sys

import pytest

from helpers import pigeonhole
from qdom.board import Board
from qdom.cli import main
from qdom.cnf import parse_cubes, parse_dimacs, to_dimacs
from qdom.encoding import build_encoding
from qdom.enumeration import read_solutions, verify_solution_rows


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0


def test_missing_subcommand_is_usage_error(capsys):
    assert run(capsys)[0] == 1


def test_unknown_flag_is_usage_error(capsys):
    assert run(capsys, "oracle", "--n", "3", "--frobnicate")[0] == 1


def test_bad_board_size_is_usage_error(capsys):
    code, _, err = run(capsys, "oracle", "--n", "0")
    assert code == 1
    assert "error" in err


def test_encode_writes_dimacs(tmp_path, capsys):
    out = tmp_path / "n4.cnf"
    code, stdout, _ = run(
        capsys, "encode", "--n", "4", "--gamma", "2", "-o", str(out)
    )
    assert code == 0
    f = parse_dimacs(out.read_text())
    ref = build_encoding(Board(4), 2)
    assert f.num_vars == ref.num_vars
    assert f.clauses == ref.clauses
    assert f"vars={ref.num_vars}" in stdout


def test_encode_symmetry_deltas(tmp_path, capsys):
    on = tmp_path / "on.cnf"
    off = tmp_path / "off.cnf"
    run(capsys, "encode", "--n", "4", "--gamma", "2", "-o", str(on))
    run(capsys, "encode", "--n", "4", "--gamma", "2", "--symmetry", "off", "-o", str(off))
    fon = parse_dimacs(on.read_text())
    foff = parse_dimacs(off.read_text())
    assert fon.num_clauses - foff.num_clauses == 7 * (3 * 16 + 2)
    assert fon.num_vars - foff.num_vars == 7 * (16 + 1)


def test_solve_sat_exit_10(tmp_path, capsys):
    path = tmp_path / "sat.cnf"
    path.write_text(to_dimacs(build_encoding(Board(4), 2)))
    code, stdout, _ = run(capsys, "solve", str(path))
    assert code == 10
    assert "s SATISFIABLE" in stdout
    vlines = [l for l in stdout.splitlines() if l.startswith("v ")]
    lits = [int(t) for l in vlines for t in l[2:].split()]
    assert lits[-1] == 0
    assert len(lits) - 1 == build_encoding(Board(4), 2).num_vars


def test_solve_unsat_exit_20(tmp_path, capsys):
    path = tmp_path / "unsat.cnf"
    path.write_text(to_dimacs(build_encoding(Board(4), 1)))
    code, stdout, _ = run(capsys, "solve", str(path))
    assert code == 20
    assert "s UNSATISFIABLE" in stdout


def test_solve_budget_exhaustion_exit_3(tmp_path, capsys):
    path = tmp_path / "hard.cnf"
    path.write_text(to_dimacs(pigeonhole(5)))
    code, stdout, _ = run(capsys, "solve", str(path), "--conflicts", "2")
    assert code == 3
    assert "s UNKNOWN" in stdout


def test_solve_proof_requires_external(tmp_path, capsys):
    path = tmp_path / "x.cnf"
    path.write_text("p cnf 1 1\n1 0\n")
    code, _, err = run(capsys, "solve", str(path), "--proof", str(tmp_path / "p.out"))
    assert code == 1
    assert "external" in err


def test_enumerate_n4(tmp_path, capsys):
    sol = tmp_path / "n4.sols"
    heat = tmp_path / "n4.csv"
    code, stdout, _ = run(
        capsys,
        "enumerate", "--n", "4",
        "--solutions", str(sol),
        "--heatmap", str(heat),
    )
    assert code == 0
    assert "classes=3" in stdout
    assert "labeled=12" in stdout
    assert "frequency_symmetry=pass" in stdout
    n, gamma, rows = read_solutions(sol.open())
    assert (n, gamma) == (4, 2)
    assert len(verify_solution_rows(Board(4), gamma, rows)) == 3
    lines = heat.read_text().splitlines()
    assert len(lines) == 5
    assert lines[-1] == "total,12"


def test_enumerate_explicit_gamma_upper(capsys):
    code, stdout, _ = run(capsys, "enumerate", "--n", "4", "--gamma-upper", "3")
    assert code == 0
    assert "gamma=2" in stdout


def test_enumerate_gamma_validation(capsys):
    assert run(capsys, "enumerate", "--n", "4", "--gamma", "0")[0] == 1


def test_enumerate_budget_exit_3(capsys):
    code, _, err = run(capsys, "enumerate", "--n", "5", "--conflicts", "1")
    assert code == 3
    assert "gave up" in err


def test_enumerate_needs_gamma_beyond_oracle(capsys):
    code, _, err = run(capsys, "enumerate", "--n", "9")
    assert code == 1
    assert "--gamma" in err


def test_oracle_output(capsys):
    code, stdout, _ = run(capsys, "oracle", "--n", "4")
    assert code == 0
    assert stdout.splitlines()[-1] == "4\t2\t12\t3"


def test_bench_small_grid(capsys):
    code, stdout, _ = run(
        capsys, "bench", "--n-min", "4", "--n-max", "4", "--orders", "default,hilbert"
    )
    assert code == 0
    lines = stdout.splitlines()
    assert lines[0].startswith("n\tqueens\tcard\torder")
    rows = lines[1:]
    assert len(rows) == 6  # 3 encoders x 2 orderings
    assert all("\tunsat\t" in r for r in rows)
    assert all(r.split("\t")[1] == "1" for r in rows)


def test_bench_gamma_override(capsys):
    code, stdout, _ = run(
        capsys,
        "bench", "--n-min", "4", "--n-max", "4",
        "--cards", "mtotalizer", "--orders", "default",
        "--gamma", "4=3",
    )
    assert code == 0
    row = stdout.splitlines()[1].split("\t")
    assert row[1] == "2"  # probes gamma-1 queens
    assert row[6] == "sat"


def test_bench_rejects_unknown_names(capsys):
    assert run(capsys, "bench", "--n-min", "4", "--n-max", "4", "--cards", "bogus")[0] == 1
    assert run(capsys, "bench", "--n-min", "4", "--n-max", "3")[0] == 1
    assert run(capsys, "bench", "--n-min", "9", "--n-max", "9")[0] == 1  # beyond oracle


def test_cube_emit_icnf(tmp_path, capsys):
    out = tmp_path / "n4.icnf"
    code, stdout, _ = run(
        capsys, "cube", "--n", "4", "--depth", "2", "--emit-icnf", str(out)
    )
    assert code == 0
    cubes = parse_cubes(out.read_text())
    assert len(cubes) == 4
    assert out.read_text().startswith("p inccnf\n")


def test_cube_depth_xor_cubes(tmp_path, capsys):
    assert run(capsys, "cube", "--n", "4")[0] == 1
    icnf = tmp_path / "c.icnf"
    run(capsys, "cube", "--n", "4", "--depth", "1", "--emit-icnf", str(icnf))
    code, _, err = run(
        capsys, "cube", "--n", "4", "--depth", "1", "--cubes", str(icnf)
    )
    assert code == 1
    assert "exactly one" in err


def test_cube_decide(capsys):
    code, stdout, _ = run(capsys, "cube", "--n", "4", "--depth", "2")
    assert code == 0
    assert "status=sat" in stdout
    assert "witness=" in stdout


def test_cube_decide_unsat(capsys):
    code, stdout, _ = run(capsys, "cube", "--n", "4", "--gamma", "1", "--depth", "2")
    assert code == 0
    assert "status=unsat" in stdout


def test_cube_enumerate_from_file(tmp_path, capsys):
    icnf = tmp_path / "n4.icnf"
    run(capsys, "cube", "--n", "4", "--depth", "2", "--emit-icnf", str(icnf))
    code, stdout, _ = run(
        capsys, "cube", "--n", "4", "--cubes", str(icnf), "--mode", "enumerate"
    )
    assert code == 0
    assert "classes=3" in stdout
    assert "labeled=12" in stdout


def test_cube_unknown_exit_3(capsys):
    # refuting 2 queens on 5x5 needs search, so a 1-conflict budget gives up
    code, stdout, _ = run(
        capsys, "cube", "--n", "5", "--gamma", "2", "--depth", "1", "--conflicts", "1"
    )
    assert code == 3
    assert "status=unknown" in stdout


def test_verify_roundtrip_and_tampering(tmp_path, capsys):
    sol = tmp_path / "n4.sols"
    run(capsys, "enumerate", "--n", "4", "--solutions", str(sol))
    code, stdout, _ = run(capsys, "verify", str(sol))
    assert code == 0
    assert "verify=pass" in stdout
    assert "complete=not-checked" in stdout

    lines = sol.read_text().splitlines()
    first = lines[0].split()
    first[2] = "8"  # forge the orbit size
    sol.write_text("\n".join([" ".join(first)] + lines[1:]) + "\n")
    code, _, err = run(capsys, "verify", str(sol))
    assert code == 2
    assert "integrity error" in err


def test_verify_complete(tmp_path, capsys):
    sol = tmp_path / "n4.sols"
    run(capsys, "enumerate", "--n", "4", "--solutions", str(sol))
    code, stdout, _ = run(capsys, "verify", str(sol), "--complete")
    assert code == 0
    assert "complete=yes" in stdout


def test_verify_complete_catches_missing_row(tmp_path, capsys):
    sol = tmp_path / "n4.sols"
    run(capsys, "enumerate", "--n", "4", "--solutions", str(sol))
    lines = sol.read_text().splitlines()
    sol.write_text("\n".join(lines[:-1]) + "\n")  # drop one class
    code, _, err = run(capsys, "verify", str(sol), "--complete")
    assert code == 2
    assert "incomplete" in err


def test_heatmap_command(tmp_path, capsys):
    out = tmp_path / "n5.csv"
    code, stdout, _ = run(capsys, "heatmap", "--n", "5", "-o", str(out))
    assert code == 0
    assert "frequency_symmetry=pass" in stdout
    rows = out.read_text().splitlines()
    assert len(rows) == 6
    assert rows[-1].startswith("total,")


def test_external_solver_via_own_cli(tmp_path, capsys):
    # route the enumeration through the solve subcommand as a subprocess
    code, stdout, _ = run(
        capsys,
        "enumerate", "--n", "3",
        "--solver", sys.executable,
        "--solver-arg=-m", "--solver-arg=qdom", "--solver-arg=solve",
    )
    assert code == 0
    assert "classes=1" in stdout
    assert "backend=" in stdout


def test_module_entrypoint_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "qdom", "oracle", "--n", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "3\t1\t1\t1"
