"""Shared test oracles.

The DPLL here is deliberately independent of qdom.solver: a dozen lines of
recursion with unit propagation, used to decide satisfiability of small
formulas so encoder tests do not trust the code under test.
"""

from itertools import combinations


def dpll_sat(clauses, assignment=None):
    """Satisfiability of a clause list (external literals).  Returns a dict
    var -> bool on success, None on unsat.  Small inputs only."""
    if assignment is None:
        assignment = {}
    clauses = [list(c) for c in clauses]
    assignment = dict(assignment)
    while True:
        unit = None
        simplified = []
        for c in clauses:
            live = []
            sat = False
            for l in c:
                b = assignment.get(abs(l))
                if b is None:
                    live.append(l)
                elif (l > 0) == b:
                    sat = True
                    break
            if sat:
                continue
            if not live:
                return None
            if len(live) == 1 and unit is None:
                unit = live[0]
            simplified.append(live)
        clauses = simplified
        if unit is None:
            break
        assignment[abs(unit)] = unit > 0
    if not clauses:
        return assignment
    v = abs(clauses[0][0])
    for b in (True, False):
        out = dpll_sat(clauses, {**assignment, v: b})
        if out is not None:
            return out
    return None


def projected_models(formula, variables):
    """All assignments to `variables` (tuple of bools, in order) that extend
    to a full model of the formula.  Brute force over the projection, DPLL
    for the extension."""
    out = set()
    nv = len(variables)
    for bits in range(1 << nv):
        pick = tuple(bool(bits >> i & 1) for i in range(nv))
        units = [[v if b else -v] for v, b in zip(variables, pick)]
        if dpll_sat(list(formula.clauses) + units) is not None:
            out.add(pick)
    return out


def at_most_k_sets(m, k):
    """Ground truth for an at-most-k constraint over m inputs: every 0/1
    tuple with at most k ones."""
    out = set()
    for count in range(min(m, k) + 1):
        for ones in combinations(range(m), count):
            out.add(tuple(i in ones for i in range(m)))
    return out


def pigeonhole(holes, pigeons=None):
    """Unsatisfiable pigeonhole formula (pigeons = holes+1 by default).
    Small values already force real search: 5 holes needs >100 conflicts."""
    from qdom.cnf import CnfFormula

    pigeons = holes + 1 if pigeons is None else pigeons
    f = CnfFormula()
    f.num_vars = pigeons * holes

    def var(i, j):
        return i * holes + j + 1

    for i in range(pigeons):
        f.add_clause([var(i, j) for j in range(holes)])
    for j in range(holes):
        for a in range(pigeons):
            for b in range(a + 1, pigeons):
                f.add_clause([-var(a, j), -var(b, j)])
    return f


def brute_force_sat(clauses, num_vars):
    """Exhaustive satisfiability over vars 1..num_vars.  Exponential; keep
    num_vars small."""
    for bits in range(1 << num_vars):
        ok = True
        for c in clauses:
            if not any((l > 0) == bool(bits >> (abs(l) - 1) & 1) for l in c):
                ok = False
                break
        if ok:
            return True
    return False
