"""CNF formulas and their DIMACS / incremental-CNF serializations.

Variables are positive integers.  A literal is a nonzero integer, negative
for negation.  Clause order and literal order inside clauses are preserved
exactly as added, so serialization is deterministic.
"""

from dataclasses import dataclass, field


@dataclass
class CnfFormula:
    num_vars: int = 0
    clauses: list = field(default_factory=list)
    # Number of leading variables that model queen placements (they are
    # 1..queen_vars; everything above is auxiliary).  Not part of equality.
    queen_vars: int = field(default=0, compare=False)

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def new_vars(self, count: int) -> list[int]:
        out = list(range(self.num_vars + 1, self.num_vars + count + 1))
        self.num_vars += count
        return out

    def add_clause(self, lits) -> None:
        clause = list(lits)
        if not clause:
            raise ValueError("empty clause")
        for lit in clause:
            if not isinstance(lit, int) or lit == 0:
                raise ValueError(f"bad literal {lit!r}")
            v = abs(lit)
            if v > self.num_vars:
                self.num_vars = v
        self.clauses.append(clause)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


def to_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    for clause in f.clauses:
        lines.append(" ".join(map(str, clause)) + " 0")
    return "\n".join(lines) + "\n"


def to_icnf(f: CnfFormula, cubes) -> str:
    """Incremental CNF: a `p inccnf` header, the clauses, then one
    assumption line `a <lits> 0` per cube."""
    cubes = [list(c) for c in cubes]
    if not cubes:
        raise ValueError("cube list is empty")
    seen = set()
    for cube in cubes:
        if not cube:
            raise ValueError("empty cube")
        for lit in cube:
            if lit == 0 or abs(lit) > f.num_vars:
                raise ValueError(f"cube literal {lit} outside formula variables")
        key = tuple(cube)
        if key in seen:
            raise ValueError(f"duplicate cube {key}")
        seen.add(key)
    lines = ["p inccnf"]
    for clause in f.clauses:
        lines.append(" ".join(map(str, clause)) + " 0")
    for cube in cubes:
        lines.append("a " + " ".join(map(str, cube)) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF.  Comment lines (`c`) are skipped; the `p cnf` header
    is required and clause/variable counts are checked against the body."""
    header = None
    clauses = []
    current = []
    max_var = 0
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise ValueError("duplicate DIMACS header")
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise ValueError(f"bad DIMACS header {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise ValueError("clause before DIMACS header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                if not current:
                    raise ValueError("empty clause in DIMACS input")
                clauses.append(current)
                current = []
            else:
                current.append(lit)
                max_var = max(max_var, abs(lit))
    if header is None:
        raise ValueError("missing DIMACS header")
    if current:
        raise ValueError("unterminated clause in DIMACS input")
    num_vars, num_clauses = header
    if len(clauses) != num_clauses:
        raise ValueError(f"header declares {num_clauses} clauses, found {len(clauses)}")
    if max_var > num_vars:
        raise ValueError(f"literal uses variable {max_var} > declared {num_vars}")
    return CnfFormula(num_vars=num_vars, clauses=clauses)


def parse_cubes(text: str) -> list[tuple[int, ...]]:
    """Read cube lines (`a <lits> 0`), as produced by to_icnf or by cube
    splitting tools.  Non-cube lines are ignored so a full iCNF file works."""
    cubes = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line.startswith("a ") and line != "a":
            continue
        toks = line.split()[1:]
        if not toks or toks[-1] != "0":
            raise ValueError(f"cube line missing terminating 0: {raw!r}")
        lits = [int(t) for t in toks[:-1]]
        if not lits or any(l == 0 for l in lits):
            raise ValueError(f"bad cube line: {raw!r}")
        cubes.append(tuple(lits))
    if not cubes:
        raise ValueError("no cube lines found")
    return cubes
