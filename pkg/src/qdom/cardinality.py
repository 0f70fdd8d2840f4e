"""At-most-k cardinality constraints over a sequence of literals.

Three encodings, all one-directional (registers are forced upward by the
true-literal count; the upper bound is imposed on the top registers):

seqcard     Sinz sequential counter with a full m*k register bank.
totalizer   balanced binary totalizer; the root keeps all m outputs and the
            bound is m-k unit clauses on the overflow outputs.
mtotalizer  modulo totalizer: each node counts in base p with a unary
            quotient register, a unary remainder register (width p-1) and
            one carry variable per merge.  Default modulus ceil(sqrt(k+1)).

Auxiliary variables are always fresh.  A constraint with k = 0 degenerates
to unit clauses, and k >= len(lits) adds nothing.
"""

import math

ENCODERS = ("seqcard", "totalizer", "mtotalizer")


def default_modulus(k: int) -> int:
    """Smallest integer p >= 2 with p*p >= k+1."""
    t = math.isqrt(k + 1)
    if t * t < k + 1:
        t += 1
    return max(2, t)


def encode_at_most_k(f, lits, k, kind="mtotalizer", modulus=None):
    lits = list(lits)
    if not lits:
        raise ValueError("no literals")
    if len({abs(l) for l in lits}) != len(lits):
        raise ValueError("literals must use distinct variables")
    if k < 0:
        raise ValueError(f"bound must be >= 0, got {k}")
    for l in lits:
        if l == 0 or abs(l) > f.num_vars:
            raise ValueError(f"literal {l} outside formula variables")
    if k >= len(lits):
        return
    if k == 0:
        for l in lits:
            f.add_clause([-l])
        return
    if kind == "seqcard":
        _seqcard(f, lits, k)
    elif kind == "totalizer":
        _totalizer(f, lits, k)
    elif kind == "mtotalizer":
        _mtotalizer(f, lits, k, modulus)
    else:
        raise ValueError(f"unknown encoder {kind!r}")


def _seqcard(f, lits, k):
    m = len(lits)
    # s[i][j-1] holds "at least j of lits[0..i] are true"; one full row per
    # input, so m*k registers even though the last row feeds no clause.
    s = [f.new_vars(k) for _ in range(m)]
    f.add_clause([-lits[0], s[0][0]])
    for j in range(1, k):
        f.add_clause([-s[0][j]])
    for i in range(1, m):
        f.add_clause([-lits[i], s[i][0]])
        f.add_clause([-s[i - 1][0], s[i][0]])
        for j in range(1, k):
            f.add_clause([-lits[i], -s[i - 1][j - 1], s[i][j]])
            f.add_clause([-s[i - 1][j], s[i][j]])
        f.add_clause([-lits[i], -s[i - 1][k - 1]])


def _totalizer(f, lits, k):
    outs = _tot_node(f, lits)
    for j in range(k, len(outs)):
        f.add_clause([-outs[j]])


def _tot_node(f, seq):
    if len(seq) == 1:
        return [seq[0]]
    mid = len(seq) // 2
    left = _tot_node(f, seq[:mid])
    right = _tot_node(f, seq[mid:])
    out = f.new_vars(len(seq))
    for a in range(len(left) + 1):
        for b in range(len(right) + 1):
            s = a + b
            if s == 0:
                continue
            clause = []
            if a:
                clause.append(-left[a - 1])
            if b:
                clause.append(-right[b - 1])
            clause.append(out[s - 1])
            f.add_clause(clause)
    return out


def _mtotalizer(f, lits, k, modulus=None):
    p = default_modulus(k) if modulus is None else modulus
    if p < 2:
        raise ValueError(f"modulus must be >= 2, got {p}")
    q, r, m = _mto_node(f, lits, p)
    kq, kr = divmod(k, p)
    if kq < len(q):
        f.add_clause([-q[kq]])
    if kr + 1 <= len(r):
        if kq == 0:
            f.add_clause([-r[kr]])
        else:
            f.add_clause([-q[kq - 1], -r[kr]])


def _mto_node(f, seq, p):
    """Returns (quotient registers, remainder registers, input count)."""
    if len(seq) == 1:
        return [], [seq[0]], 1
    mid = len(seq) // 2
    qa, ra, ma = _mto_node(f, seq[:mid], p)
    qb, rb, mb = _mto_node(f, seq[mid:], p)
    mc = ma + mb
    qc = f.new_vars(mc // p)
    rc = f.new_vars(min(p - 1, mc))
    w = f.new_var()  # carry out of the remainder sum
    # Remainder sums: below p they land in rc unless the carry fires; at p
    # or above the carry must fire; above p the wrapped remainder lands too.
    for i in range(len(ra) + 1):
        for j in range(len(rb) + 1):
            s = i + j
            if s == 0:
                continue
            base = []
            if i:
                base.append(-ra[i - 1])
            if j:
                base.append(-rb[j - 1])
            if s < p:
                f.add_clause(base + [rc[s - 1], w])
            else:
                f.add_clause(base + [w])
                if s > p:
                    f.add_clause(base + [rc[s - p - 1]])
    # Quotient sums, with and without the carry.  A carried sum that would
    # exceed the register width is impossible, so its premise is forbidden.
    for a in range(len(qa) + 1):
        for b in range(len(qb) + 1):
            base = []
            if a:
                base.append(-qa[a - 1])
            if b:
                base.append(-qb[b - 1])
            s = a + b
            if s >= 1:
                f.add_clause(base + [qc[s - 1]])
            if s + 1 <= len(qc):
                f.add_clause(base + [-w, qc[s]])
            else:
                f.add_clause(base + [-w])
    return qc, rc, mc
