"""SAT solving: an embedded CDCL solver and an external-solver adapter.

The embedded solver is a conflict-driven clause-learning solver with watched
literals, first-UIP learning with local minimization, VSIDS branching, phase
saving (default phase false), Luby restarts, and learned-clause reduction.
It solves incrementally: clauses may be added between solve() calls and
learned clauses are kept, which is what makes model enumeration by blocking
clauses affordable.  Every satisfiable answer is verified against all added
clauses before it is returned.

Literals follow the DIMACS convention externally (nonzero ints, negative for
negation).  Internally literal l of variable v is encoded as 2v (positive)
or 2v+1 (negative) so arrays can be indexed by literal.
"""

import os
import shutil
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from heapq import heapify, heappop, heappush

from .cnf import CnfFormula, parse_dimacs, to_dimacs


class IntegrityError(Exception):
    """A result failed its own consistency check (claimed model falsifies a
    clause, enumerator produced a non-solution, and so on).  Distinct from
    "unknown": it means a component lied, not that it gave up."""


@dataclass
class SolveStats:
    decisions: int = 0
    conflicts: int = 0
    propagations: int = 0
    restarts: int = 0


@dataclass
class SolveResult:
    status: str  # "sat" | "unsat" | "unknown"
    model: list | None = None  # total assignment, model[v-1] = +-v
    stats: SolveStats = field(default_factory=SolveStats)
    detail: str = ""


def _luby(i):
    # Luby sequence, 1-based: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
    k = i.bit_length()
    if i == (1 << k) - 1:
        return 1 << (k - 1)
    return _luby(i - (1 << (k - 1)) + 1)


class CdclSolver:
    RESTART_BASE = 100
    VAR_DECAY = 0.95

    def __init__(self, num_vars=0):
        self.num_vars = 0
        self.ok = True
        self.value = [0, 0]  # indexed by internal literal
        self.level = [0]
        self.reason = [None]
        self.saved = [0]  # saved phase per var, 0 = false
        self.activity = [0.0]
        self.watches = [[], []]  # clauses of length >= 3, two watched literals
        self.bwatches = [[], []]  # binary clauses as (other, clause) pairs
        self.heap = []
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.clauses = []  # problem clauses (internal lits)
        self.learnts = []  # [clause, lbd] pairs
        self.orig = []  # every added clause, for model verification
        self.seen = bytearray(1)
        self.var_inc = 1.0
        self.max_learnts = 4000
        self.simp_trail = 0
        self.stats = SolveStats()
        if num_vars:
            self.ensure_vars(num_vars)

    def ensure_vars(self, n):
        while self.num_vars < n:
            self.num_vars += 1
            v = self.num_vars
            self.value.extend((0, 0))
            self.level.append(0)
            self.reason.append(None)
            self.saved.append(0)
            self.activity.append(0.0)
            self.watches.append([])
            self.watches.append([])
            self.bwatches.append([])
            self.bwatches.append([])
            self.seen.append(0)
            heappush(self.heap, (0.0, v))

    def add_clause(self, lits):
        """Add a clause of external literals.  Grows the variable range as
        needed.  May be called between solve() calls."""
        self._backtrack(0)
        internal = []
        present = set()
        for e in lits:
            if e == 0:
                raise ValueError("literal 0 in clause")
            v = abs(e)
            self.ensure_vars(v)
            l = (v << 1) | (e < 0)
            if l in present:
                continue
            if l ^ 1 in present:
                return  # tautology
            present.add(l)
            internal.append(l)
        if not internal:
            raise ValueError("empty clause")
        self.orig.append(internal)
        value = self.value
        live = [l for l in internal if value[l] >= 0]
        if any(value[l] > 0 for l in live):
            return  # satisfied at level 0
        if not live:
            self.ok = False
            return
        if len(live) == 1:
            self._enqueue(live[0], None)
            return
        clause = list(live)
        self.clauses.append(clause)
        self._attach(clause)

    def _attach(self, clause):
        if len(clause) == 2:
            self.bwatches[clause[0]].append((clause[1], clause))
            self.bwatches[clause[1]].append((clause[0], clause))
        else:
            self.watches[clause[0]].append([clause, clause[1]])
            self.watches[clause[1]].append([clause, clause[0]])

    # -- assignment handling --------------------------------------------

    def _enqueue(self, l, reason_clause):
        value = self.value
        value[l] = 1
        value[l ^ 1] = -1
        v = l >> 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason_clause
        self.trail.append(l)

    def _backtrack(self, lvl):
        if len(self.trail_lim) <= lvl:
            return
        trail = self.trail
        value = self.value
        saved = self.saved
        reason = self.reason
        heap = self.heap
        activity = self.activity
        bound = self.trail_lim[lvl]
        for k in range(len(trail) - 1, bound - 1, -1):
            l = trail[k]
            v = l >> 1
            value[l] = 0
            value[l ^ 1] = 0
            saved[v] = 1 - (l & 1)
            reason[v] = None
            heappush(heap, (-activity[v], v))
        del trail[bound:]
        del self.trail_lim[lvl:]
        self.qhead = bound

    # -- search ----------------------------------------------------------

    def _propagate(self):
        value = self.value
        watches = self.watches
        bwatches = self.bwatches
        trail = self.trail
        reason = self.reason
        level = self.level
        lvl = len(self.trail_lim)
        qhead = self.qhead
        confl = None
        ntrail = len(trail)
        nprops = 0
        while qhead < ntrail:
            p = trail[qhead]
            qhead += 1
            nprops += 1
            fl = p ^ 1
            for other, c in bwatches[fl]:
                vo = value[other]
                if vo > 0:
                    continue
                if vo < 0:
                    confl = c
                    break
                if c[0] != other:
                    c[0] = other
                    c[1] = fl
                value[other] = 1
                value[other ^ 1] = -1
                v = other >> 1
                level[v] = lvl
                reason[v] = c
                trail.append(other)
                ntrail += 1
            if confl is not None:
                break
            ws = watches[fl]
            i = j = 0
            end = len(ws)
            while i < end:
                w = ws[i]
                i += 1
                if value[w[1]] > 0:
                    ws[j] = w
                    j += 1
                    continue
                c = w[0]
                if c[0] == fl:
                    c[0] = c[1]
                    c[1] = fl
                first = c[0]
                if value[first] > 0:
                    w[1] = first
                    ws[j] = w
                    j += 1
                    continue
                moved = False
                for k in range(2, len(c)):
                    lk = c[k]
                    if value[lk] >= 0:
                        c[1] = lk
                        c[k] = fl
                        watches[lk].append(w)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = w
                j += 1
                if value[first] < 0:
                    confl = c
                    while i < end:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    break
                value[first] = 1
                value[first ^ 1] = -1
                v = first >> 1
                level[v] = lvl
                reason[v] = c
                trail.append(first)
                ntrail += 1
            del ws[j:]
            if confl is not None:
                break
        self.qhead = ntrail if confl is not None else qhead
        self.stats.propagations += nprops
        return confl

    def _analyze(self, confl):
        value = self.value
        reason = self.reason
        level = self.level
        trail = self.trail
        seen = self.seen
        activity = self.activity
        var_inc = self.var_inc
        dl = len(self.trail_lim)
        learnt = [0]
        bumped = []
        pathc = 0
        p = 0
        idx = len(trail) - 1
        c = confl
        while True:
            for k in range(1 if p else 0, len(c)):
                q = c[k]
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    activity[v] += var_inc
                    bumped.append(v)
                    if level[v] >= dl:
                        pathc += 1
                    else:
                        learnt.append(q)
            while True:
                p = trail[idx]
                idx -= 1
                if seen[p >> 1]:
                    break
            v = p >> 1
            seen[v] = 0
            pathc -= 1
            if pathc <= 0:
                break
            c = reason[v]
        learnt[0] = p ^ 1
        to_clear = list(learnt)
        # Local minimization: drop a literal whose reason lies entirely
        # inside the clause (or at level 0).
        if len(learnt) > 2:
            kept = [learnt[0]]
            for q in learnt[1:]:
                r = reason[q >> 1]
                if r is None:
                    kept.append(q)
                    continue
                for x in r[1:]:
                    if not seen[x >> 1] and level[x >> 1] > 0:
                        kept.append(q)
                        break
            learnt = kept
        for q in to_clear:
            seen[q >> 1] = 0
        # Rescore heap entries once per conflict.
        heap = self.heap
        for v in bumped:
            heappush(heap, (-activity[v], v))
        if activity and var_inc > 1e100:
            self._rescale_activity()
        self.var_inc = self.var_inc / self.VAR_DECAY
        if len(learnt) == 1:
            return learnt, 0, 1
        # Move a literal of the backjump level into the second slot.
        hi = 1
        for k in range(2, len(learnt)):
            if level[learnt[k] >> 1] > level[learnt[hi] >> 1]:
                hi = k
        learnt[1], learnt[hi] = learnt[hi], learnt[1]
        bt = level[learnt[1] >> 1]
        lbd = len({level[q >> 1] for q in learnt})
        return learnt, bt, lbd

    def _rescale_activity(self):
        activity = self.activity
        for v in range(1, self.num_vars + 1):
            activity[v] *= 1e-100
        self.var_inc *= 1e-100
        self._rebuild_heap()

    def _rebuild_heap(self):
        # In place: solve() and friends hold aliases to the heap list.
        value = self.value
        activity = self.activity
        self.heap[:] = [
            (-activity[v], v) for v in range(1, self.num_vars + 1) if value[v << 1] == 0
        ]
        heapify(self.heap)

    def _simplify_and_reduce(self):
        """At level 0: drop satisfied clauses, strip false literals, shrink
        the learned DB if oversized, rebuild the watch lists."""
        if self._propagate() is not None:
            self.ok = False
            return
        value = self.value
        while True:
            new_units = []
            for db, is_learnt in ((self.clauses, False), (self.learnts, True)):
                kept = []
                for entry in db:
                    c = entry[0] if is_learnt else entry
                    sat = False
                    for l in c:
                        if value[l] > 0:
                            sat = True
                            break
                    if sat:
                        continue
                    live = [l for l in c if value[l] >= 0]
                    if not live:
                        self.ok = False
                        return
                    if len(live) == 1:
                        new_units.append(live[0])
                        continue
                    c[:] = live
                    kept.append(entry)
                db[:] = kept
            if not new_units:
                break
            for l in new_units:
                if value[l] < 0:
                    self.ok = False
                    return
                if value[l] == 0:
                    self._enqueue(l, None)
        if len(self.learnts) > self.max_learnts:
            self.learnts.sort(key=lambda e: (e[1], len(e[0])))
            reason = self.reason
            keep = []
            cut = len(self.learnts) // 2
            for idx, entry in enumerate(self.learnts):
                c, lbd = entry
                locked = reason[c[0] >> 1] is c and value[c[0]] > 0
                if idx < cut or lbd <= 2 or locked:
                    keep.append(entry)
            self.learnts = keep
            self.max_learnts = int(self.max_learnts * 1.3)
        for wl in self.watches:
            del wl[:]
        for wl in self.bwatches:
            del wl[:]
        for c in self.clauses:
            self._attach(c)
        for c, _ in self.learnts:
            self._attach(c)
        self.qhead = len(self.trail)
        self.simp_trail = len(self.trail)

    def solve(self, assumptions=(), conflict_limit=None, time_limit=None):
        """Solve under the given assumptions.

        Returns SolveResult with status sat (model attached and verified),
        unsat (either globally or under the assumptions), or unknown when a
        conflict or time budget runs out.
        """
        start_stats = SolveStats(**vars(self.stats))
        deadline = time.monotonic() + time_limit if time_limit is not None else None
        self._backtrack(0)
        if not self.ok:
            return SolveResult("unsat", stats=self._delta(start_stats))
        assume = []
        for e in assumptions:
            v = abs(e)
            if e == 0 or v > self.num_vars:
                raise ValueError(f"assumption {e} outside variables 1..{self.num_vars}")
            assume.append((v << 1) | (e < 0))
        value = self.value
        saved = self.saved
        heap = self.heap
        activity = self.activity
        conflicts_here = 0
        restarts_here = 0
        restart_cap = self.RESTART_BASE * _luby(1)
        while True:
            confl = self._propagate()
            if confl is not None:
                self.stats.conflicts += 1
                conflicts_here += 1
                if not self.trail_lim:
                    self.ok = False
                    return SolveResult("unsat", stats=self._delta(start_stats))
                learnt, bt, lbd = self._analyze(confl)
                self._backtrack(bt)
                if len(learnt) == 1:
                    if value[learnt[0]] < 0:
                        self.ok = False
                        return SolveResult("unsat", stats=self._delta(start_stats))
                    if value[learnt[0]] == 0:
                        self._enqueue(learnt[0], None)
                else:
                    clause = learnt
                    self.learnts.append([clause, lbd])
                    self._attach(clause)
                    self._enqueue(clause[0], clause)
                if conflict_limit is not None and conflicts_here >= conflict_limit:
                    return SolveResult(
                        "unknown",
                        stats=self._delta(start_stats),
                        detail=f"conflict budget {conflict_limit} exhausted",
                    )
                if deadline is not None and conflicts_here % 128 == 0 and time.monotonic() > deadline:
                    return SolveResult(
                        "unknown",
                        stats=self._delta(start_stats),
                        detail=f"time budget {time_limit}s exhausted",
                    )
                if conflicts_here >= restart_cap:
                    restarts_here += 1
                    self.stats.restarts += 1
                    restart_cap = conflicts_here + self.RESTART_BASE * _luby(restarts_here + 1)
                    self._backtrack(0)
                    if len(self.trail) > self.simp_trail or len(self.learnts) > self.max_learnts:
                        self._simplify_and_reduce()
                        if not self.ok:
                            return SolveResult("unsat", stats=self._delta(start_stats))
                    if len(heap) > 4 * self.num_vars + 10000:
                        self._rebuild_heap()
                continue
            # Decide: assumptions first, then best activity, saved phase.
            lit = None
            failed = False
            for a in assume:
                va = value[a]
                if va > 0:
                    continue
                if va < 0:
                    failed = True
                    break
                lit = a
                break
            if failed:
                return SolveResult(
                    "unsat", stats=self._delta(start_stats), detail="assumptions conflict"
                )
            if lit is None:
                while heap:
                    _, v = heappop(heap)
                    if value[v << 1] == 0:
                        lit = (v << 1) | (saved[v] ^ 1)
                        break
                if lit is None:
                    model = self._extract_model()
                    self._verify_model()
                    return SolveResult("sat", model=model, stats=self._delta(start_stats))
            self.stats.decisions += 1
            if deadline is not None and self.stats.decisions % 512 == 0 and time.monotonic() > deadline:
                return SolveResult(
                    "unknown",
                    stats=self._delta(start_stats),
                    detail=f"time budget {time_limit}s exhausted",
                )
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, None)

    def _delta(self, before):
        s = self.stats
        return SolveStats(
            decisions=s.decisions - before.decisions,
            conflicts=s.conflicts - before.conflicts,
            propagations=s.propagations - before.propagations,
            restarts=s.restarts - before.restarts,
        )

    def _extract_model(self):
        value = self.value
        return [v if value[v << 1] > 0 else -v for v in range(1, self.num_vars + 1)]

    def _verify_model(self):
        value = self.value
        for c in self.orig:
            for l in c:
                if value[l] > 0:
                    break
            else:
                ext = [(-1 if l & 1 else 1) * (l >> 1) for l in c]
                raise IntegrityError(f"model claimed sat but falsifies clause {ext}")


def solve_formula(f: CnfFormula, assumptions=(), conflict_limit=None, time_limit=None):
    """One-shot solve of a formula with a fresh embedded solver."""
    s = CdclSolver(f.num_vars)
    for c in f.clauses:
        if not s.ok:
            break
        s.add_clause(c)
    return s.solve(assumptions, conflict_limit=conflict_limit, time_limit=time_limit)


def unit_propagation_conflict(f: CnfFormula, lits) -> bool:
    """True iff asserting `lits` and then running unit propagation alone
    (no search) derives a conflict.  Plain fixpoint scan; meant for checking
    encoder propagation strength, not for performance."""
    val = {}
    for l in lits:
        if val.get(abs(l), l > 0) != (l > 0):
            return True
        val[abs(l)] = l > 0
    changed = True
    while changed:
        changed = False
        for clause in f.clauses:
            unassigned = None
            count = 0
            sat = False
            for l in clause:
                b = val.get(abs(l))
                if b is None:
                    count += 1
                    unassigned = l
                elif (l > 0) == b:
                    sat = True
                    break
            if sat:
                continue
            if count == 0:
                return True
            if count == 1 and val.get(abs(unassigned)) is None:
                val[abs(unassigned)] = unassigned > 0
                changed = True
    return False


# -- external solver adapter ---------------------------------------------


@dataclass
class ExternalSolverConfig:
    executable: str
    args: tuple = ()
    proof_path: str | None = None
    timeout: float | None = None

    def __post_init__(self):
        if self.timeout is not None and self.timeout <= 0:
            raise ValueError("timeout must be positive")


def run_external(dimacs_path, cfg: ExternalSolverConfig) -> SolveResult:
    """Run an external DIMACS solver on a CNF file.

    Contract: exit 10 = satisfiable with a `v`-line model, 20 = unsatisfiable.
    Everything else (other exit codes, timeouts, unparseable output) comes
    back as unknown with a diagnostic.  A claimed model is re-verified against
    the file; a model that fails verification raises IntegrityError, which is
    deliberately distinct from unknown.  When proof_path is set it is passed
    as a final argument; nothing is checked about what the solver writes
    there.
    """
    exe = cfg.executable
    if os.sep not in exe and shutil.which(exe) is None:
        raise FileNotFoundError(f"solver executable {exe!r} not found on PATH")
    cmd = [exe, *cfg.args, str(dimacs_path)]
    if cfg.proof_path:
        cmd.append(str(cfg.proof_path))
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=cfg.timeout)
    except subprocess.TimeoutExpired:
        return SolveResult("unknown", detail=f"external solver timeout after {cfg.timeout}s")
    except OSError as exc:
        raise FileNotFoundError(f"cannot run solver {exe!r}: {exc}") from exc
    if proc.returncode == 20:
        return SolveResult("unsat")
    if proc.returncode != 10:
        tail = (proc.stderr or proc.stdout or "").strip().splitlines()
        return SolveResult(
            "unknown",
            detail=f"external solver exit code {proc.returncode}"
            + (f": {tail[-1][:200]}" if tail else ""),
        )
    assignment, complete = _parse_v_lines(proc.stdout)
    if assignment is None:
        return SolveResult("unknown", detail="external solver claimed sat but emitted no model")
    if not complete:
        return SolveResult("unknown", detail="external solver model not 0-terminated")
    with open(dimacs_path) as fh:
        f = parse_dimacs(fh.read())
    model = [assignment.get(v, -v) for v in range(1, f.num_vars + 1)]
    have = {abs(l): l > 0 for l in model}
    for clause in f.clauses:
        if not any((l > 0) == have[abs(l)] for l in clause):
            raise IntegrityError(f"external solver model falsifies clause {clause}")
    return SolveResult("sat", model=model)


def _parse_v_lines(stdout):
    assignment = {}
    terminated = False
    seen_any = False
    for line in stdout.splitlines():
        if not line.startswith("v"):
            continue
        for tok in line[1:].split():
            seen_any = True
            try:
                lit = int(tok)
            except ValueError:
                return None, False
            if lit == 0:
                terminated = True
                break
            assignment[abs(lit)] = lit
        if terminated:
            break
    if not seen_any:
        return None, False
    return assignment, terminated


# -- backends -------------------------------------------------------------


class EmbeddedBackend:
    """Solves a formula with the built-in solver, feeding only clauses added
    since the previous call so enumeration stays incremental."""

    name = "embedded"

    def __init__(self, conflict_limit=None, time_limit=None):
        self.conflict_limit = conflict_limit
        self.time_limit = time_limit
        self._formula = None
        self._solver = None
        self._fed = 0

    def solve(self, f: CnfFormula, assumptions=()):
        if self._formula is not f:
            self._formula = f
            self._solver = CdclSolver(f.num_vars)
            self._fed = 0
        self._solver.ensure_vars(f.num_vars)
        for c in f.clauses[self._fed :]:
            self._solver.add_clause(c)
        self._fed = len(f.clauses)
        return self._solver.solve(
            assumptions, conflict_limit=self.conflict_limit, time_limit=self.time_limit
        )


class ExternalBackend:
    """Solves through an external binary, one process per call.  Assumptions
    become unit clauses appended to the emitted file, so unsat answers mean
    unsat under those assumptions."""

    def __init__(self, cfg: ExternalSolverConfig):
        self.cfg = cfg
        self.name = os.path.basename(cfg.executable)

    def solve(self, f: CnfFormula, assumptions=()):
        lines = [f"p cnf {f.num_vars} {len(f.clauses) + len(assumptions)}"]
        for clause in f.clauses:
            lines.append(" ".join(map(str, clause)) + " 0")
        for a in assumptions:
            if a == 0 or abs(a) > f.num_vars:
                raise ValueError(f"assumption {a} outside variables 1..{f.num_vars}")
            lines.append(f"{a} 0")
        fd, path = tempfile.mkstemp(suffix=".cnf", prefix="qdom-")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write("\n".join(lines) + "\n")
            return run_external(path, self.cfg)
        finally:
            os.unlink(path)
