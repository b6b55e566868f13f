import pytest
from hypothesis import given, settings, strategies as st

from randassign import oracles
from randassign.cover_poset import (
    CapExceeded,
    CoverIdeal,
    FileSetPair,
    enumerate_ideal,
    enumerate_row_ideal,
    ideal_delete,
    ideal_quotient,
    is_partial_cover,
    mobius_table,
    mobius_to_top,
    truncated_boolean_mobius,
)
from randassign.instance import Instance
from randassign.matching import r_of

P = FileSetPair.of


def unit(m, n, zeros=(), k=None):
    return Instance.build([1] * m, [1] * n, zeros, k if k is not None else min(m, n))


def test_partial_cover_zero_free():
    inst = unit(3, 3, k=3)
    assert is_partial_cover(inst, P([0], [2]))
    assert is_partial_cover(inst, P())
    assert not is_partial_cover(inst, P([0, 1], [2]))


def test_partial_cover_needs_budget_for_zeros():
    inst = unit(2, 2, [(0, 0)], k=2)
    assert not is_partial_cover(inst, P([1]))
    assert is_partial_cover(inst, P([0]))
    assert is_partial_cover(inst, P((), [0]))


def test_partial_cover_rejects_foreign_files():
    with pytest.raises(ValueError):
        is_partial_cover(unit(2, 2), P([2]))


def test_enumerate_ideal_examples():
    free = enumerate_ideal(unit(2, 2))
    assert free.members == {P(), P([0]), P([1]), P((), [0]), P((), [1])}
    full = unit(2, 2, [(i, j) for i in range(2) for j in range(2)])
    assert len(enumerate_ideal(full)) == 0
    assert enumerate_ideal(unit(2, 2, [(0, 0)])).members == {P(), P([0]), P((), [0])}


def test_enumerate_row_ideal_examples():
    assert enumerate_row_ideal([], 3, 2, 2).members == {0, 1, 2, 4}
    assert enumerate_row_ideal([(0, 0), (1, 1)], 2, 2, 2).members == frozenset()
    assert enumerate_row_ideal([(0, 0)], 2, 2, 2).members == {0, 1}


def test_ideal_delete_examples():
    small = CoverIdeal(frozenset({0, 1, 2, 4}), "rows")
    assert ideal_delete(small, 0).members == {0, 2, 4}
    assert ideal_delete(CoverIdeal(frozenset({0, 1}), "rows"), 0).members == {0}
    assert ideal_delete(CoverIdeal(frozenset({0, 1}), "rows"), 1).members == {0, 1}


def test_ideal_quotient_examples():
    small = CoverIdeal(frozenset({0, 1, 2, 4}), "rows")
    # sets already holding row 0 stay: X | {0} == X
    assert ideal_quotient(small, 0).members == {0, 1}
    # agrees with adding a zero at (0, 0) to the zero-free 3x2 pattern, k=2
    assert ideal_quotient(small, 0).members == enumerate_row_ideal([(0, 0)], 3, 2, 2).members
    assert ideal_quotient(CoverIdeal(frozenset({0}), "rows"), 1).members == frozenset()


def test_mobius_worked_example():
    inst = unit(2, 2)
    assert mobius_to_top(inst, P()) == 3
    for single in (P([0]), P([1]), P((), [0]), P((), [1])):
        assert mobius_to_top(inst, single) == -1
    with pytest.raises(ValueError):
        mobius_to_top(inst, P([0, 1]))


def test_truncated_boolean_examples():
    assert truncated_boolean_mobius(4, 2) == 3
    assert truncated_boolean_mobius(4, 1) == -1
    for N in range(1, 8):
        assert truncated_boolean_mobius(N, N) == (-1) ** N
    with pytest.raises(ValueError):
        truncated_boolean_mobius(3, 4)


def test_caps_refuse_large_instances():
    with pytest.raises(CapExceeded):
        enumerate_ideal(unit(9, 9, k=2))
    with pytest.raises(CapExceeded):
        mobius_table(enumerate_ideal(unit(9, 9, k=9)), 9)
    with pytest.raises(CapExceeded):
        enumerate_row_ideal([], 10, 10, 9)


@pytest.mark.parametrize("m, n", [(m, n) for m in range(1, 8) for n in range(1, 9 - m)])
def test_zero_free_mobius_is_truncated_boolean(m, n):
    for k in range(1, min(m, n) + 1):
        inst = unit(m, n, k=k)
        ideal = enumerate_ideal(inst)
        table = mobius_table(ideal, m)
        for pair, mu in table.items():
            assert mu == truncated_boolean_mobius(m + n - pair.size, k - pair.size)
        # the generic interval recursion agrees with the whole-ideal table
        assert mobius_to_top(inst, P()) == table[P()]


@st.composite
def instances(draw, max_side=4):
    m = draw(st.integers(1, max_side))
    n = draw(st.integers(1, max_side))
    zeros = draw(st.sets(st.tuples(st.integers(0, m - 1), st.integers(0, n - 1))))
    k = draw(st.integers(1, min(m, n)))
    return unit(m, n, sorted(zeros), k)


def _pair_sets(pair, m, n):
    return (
        frozenset(i for i in range(m) if pair.rows >> i & 1),
        frozenset(j for j in range(n) if pair.cols >> j & 1),
    )


@settings(max_examples=120, deadline=None)
@given(instances())
def test_ideal_matches_brute_force_and_is_closed(inst):
    ideal = enumerate_ideal(inst)
    assert ideal.is_downward_closed()
    zs = list(inst.zeros.sites)
    for rows in range(1 << inst.m):
        for cols in range(1 << inst.n):
            X, Y = _pair_sets(FileSetPair(rows, cols), inst.m, inst.n)
            expected = oracles.brute_is_partial_cover(zs, inst.m, inst.n, inst.k, X, Y)
            assert (FileSetPair(rows, cols) in ideal) == expected


@settings(max_examples=120, deadline=None)
@given(instances())
def test_mobius_sums_to_one_above_every_member(inst):
    ideal = enumerate_ideal(inst)
    table = mobius_table(ideal, inst.m)
    for p in ideal.members:
        above = [q for q in ideal.members if q.rows & p.rows == p.rows and q.cols & p.cols == p.cols]
        assert sum(-table[q] for q in above) == 1
        assert mobius_to_top(inst, p) == table[p]


@settings(max_examples=120, deadline=None)
@given(instances(max_side=5))
def test_extension_by_forced_rows(inst):
    ideal = enumerate_row_ideal(inst.zeros.sites, inst.m, inst.n, inst.k)
    assert ideal.is_downward_closed()
    forced = sum(1 << i for i in r_of(inst.zeros.sites, inst.m, inst.n))
    for x in range(1 << inst.m):
        assert (x in ideal) == ((x | forced) in ideal)


IDEALS = {size: list(oracles.all_ideals(size)) for size in range(1, 5)}


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.data())
def test_delete_and_quotient_stay_closed(size, data):
    fam = data.draw(st.sampled_from(IDEALS[size]))
    i = data.draw(st.integers(0, size - 1))
    ideal = CoverIdeal(fam, "rows")
    assert ideal_delete(ideal, i).is_downward_closed()
    quot = ideal_quotient(ideal, i)
    assert quot.is_downward_closed()
    assert quot.members == {x for x in range(1 << size) if (x | 1 << i) in fam}
