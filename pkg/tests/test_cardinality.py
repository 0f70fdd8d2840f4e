import pytest

from helpers import at_most_k_sets, projected_models
from qdom.cardinality import ENCODERS, default_modulus, encode_at_most_k
from qdom.cnf import CnfFormula
from qdom.solver import unit_propagation_conflict


def _fresh(m):
    f = CnfFormula()
    inputs = f.new_vars(m)
    return f, inputs


def test_default_modulus_values():
    assert default_modulus(1) == 2
    assert default_modulus(2) == 2
    assert default_modulus(3) == 2
    assert default_modulus(4) == 3
    assert default_modulus(8) == 3
    assert default_modulus(9) == 4
    assert default_modulus(15) == 4
    assert default_modulus(16) == 5


def test_default_modulus_is_minimal():
    for k in range(1, 60):
        p = default_modulus(k)
        assert p * p >= k + 1
        assert p == 2 or (p - 1) * (p - 1) < k + 1


def test_validation():
    f, inputs = _fresh(3)
    with pytest.raises(ValueError):
        encode_at_most_k(f, [], 1)
    with pytest.raises(ValueError):
        encode_at_most_k(f, [1, -1], 1)  # same variable twice
    with pytest.raises(ValueError):
        encode_at_most_k(f, [1, 2], -1)
    with pytest.raises(ValueError):
        encode_at_most_k(f, [1, 9], 1)  # variable outside formula
    with pytest.raises(ValueError):
        encode_at_most_k(f, [1, 2], 1, kind="cardnet")
    with pytest.raises(ValueError):
        encode_at_most_k(f, [1, 2], 1, kind="mtotalizer", modulus=1)


def test_k_at_least_m_is_vacuous():
    for kind in ENCODERS:
        f, inputs = _fresh(4)
        encode_at_most_k(f, inputs, 4, kind=kind)
        encode_at_most_k(f, inputs, 7, kind=kind)
        assert f.num_clauses == 0
        assert f.num_vars == 4


def test_k_zero_is_unit_negations():
    for kind in ENCODERS:
        f, inputs = _fresh(3)
        encode_at_most_k(f, inputs, 0, kind=kind)
        assert f.clauses == [[-1], [-2], [-3]]


@pytest.mark.parametrize("kind", ENCODERS)
@pytest.mark.parametrize("m", range(1, 9))
@pytest.mark.parametrize("k", range(1, 5))
def test_truth_table_semantics(kind, m, k):
    # projected onto the inputs, the encoding accepts exactly the
    # assignments with at most k true inputs
    f, inputs = _fresh(m)
    encode_at_most_k(f, inputs, k, kind=kind)
    assert projected_models(f, inputs) == at_most_k_sets(m, k)


@pytest.mark.parametrize("kind", ENCODERS)
def test_truth_table_negative_literals(kind):
    # bounds count satisfied literals, so negated inputs flip the sense
    f, inputs = _fresh(4)
    lits = [inputs[0], -inputs[1], inputs[2], -inputs[3]]
    encode_at_most_k(f, lits, 2, kind=kind)
    expected = {
        bits
        for bits in at_most_k_sets(4, 4)
        if (bits[0] + (not bits[1]) + bits[2] + (not bits[3])) <= 2
    }
    assert projected_models(f, inputs) == expected


@pytest.mark.parametrize("modulus", [2, 3, 4, 5])
def test_mtotalizer_modulus_override(modulus):
    f, inputs = _fresh(6)
    encode_at_most_k(f, inputs, 3, kind="mtotalizer", modulus=modulus)
    assert projected_models(f, inputs) == at_most_k_sets(6, 3)


@pytest.mark.parametrize("kind", ["seqcard", "totalizer"])
def test_unit_propagation_detects_overflow(kind):
    # k+1 true inputs must conflict under propagation alone, no search.
    # mtotalizer is exempt: its remainder/carry disjunctions stall
    # propagation on spread subsets, so only full search refutes them.
    f, inputs = _fresh(6)
    encode_at_most_k(f, inputs, 2, kind=kind)
    for chosen in [(0, 1, 2), (0, 2, 5), (3, 4, 5), (1, 3, 5)]:
        assert unit_propagation_conflict(f, [inputs[i] for i in chosen])
    for chosen in [(0, 1), (2, 5), (4,)]:
        assert not unit_propagation_conflict(f, [inputs[i] for i in chosen])


def test_mtotalizer_adjacent_overflow_propagates():
    # adjacent true inputs keep whole subtrees exact, which is enough for
    # propagation to reach the root bound
    f, inputs = _fresh(6)
    encode_at_most_k(f, inputs, 2, kind="mtotalizer")
    assert unit_propagation_conflict(f, inputs[:3])


def test_seqcard_register_bank_shape():
    # one k-wide register row per input, even for the last row
    for m in (3, 5, 8):
        for k in (1, 2, 4):
            if k >= m:
                continue
            f, inputs = _fresh(m)
            encode_at_most_k(f, inputs, k, kind="seqcard")
            assert f.num_vars - m == m * k
            assert f.num_clauses == k + (m - 1) * (2 * k + 1)


def _tree_aux(m, width):
    # reference recursion: an internal node over mc inputs allocates width(mc)
    # fresh variables, splitting the inputs at the midpoint
    if m == 1:
        return 0
    mid = m // 2
    return _tree_aux(mid, width) + _tree_aux(m - mid, width) + width(m)


def test_totalizer_aux_count():
    for m in (2, 5, 8, 13):
        for k in (1, 3):
            if k >= m:
                continue
            f, inputs = _fresh(m)
            encode_at_most_k(f, inputs, k, kind="totalizer")
            assert f.num_vars - m == _tree_aux(m, lambda mc: mc)


def test_totalizer_root_bound_is_units():
    f, inputs = _fresh(5)
    encode_at_most_k(f, inputs, 2, kind="totalizer")
    units = [c for c in f.clauses if len(c) == 1]
    # m - k unit clauses on the root's overflow outputs
    assert len(units) == 3
    root_top = f.num_vars
    assert units == [[-(root_top - 2)], [-(root_top - 1)], [-root_top]]


def test_mtotalizer_aux_count():
    for m, k in ((4, 2), (8, 3), (8, 4), (13, 4)):
        p = default_modulus(k)
        f, inputs = _fresh(m)
        encode_at_most_k(f, inputs, k, kind="mtotalizer")
        assert f.num_vars - m == _tree_aux(m, lambda mc: mc // p + min(p - 1, mc) + 1)


def test_encoders_project_identically():
    # the three encoders differ in auxiliaries only
    for m in (5, 7):
        for k in (2, 3):
            sets = []
            for kind in ENCODERS:
                f, inputs = _fresh(m)
                encode_at_most_k(f, inputs, k, kind=kind)
                sets.append(projected_models(f, inputs))
            assert sets[0] == sets[1] == sets[2]
