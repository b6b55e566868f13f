from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from randassign.instance import (
    Instance,
    InstanceError,
    WeightedSet,
    ZeroPattern,
    complement_weight,
    parse_instance,
    parse_scalar,
    serialize_instance,
    subset_weight,
)


def test_parse_unit_instance():
    inst = parse_instance('{"rows":[1,1],"cols":[1,1],"zeros":[],"k":2}')
    assert (inst.m, inst.n, inst.k) == (2, 2, 2)
    assert inst.exact
    assert len(inst.zeros) == 0
    assert inst.rows.weights == (1, 1)


def test_parse_rational_weights_and_zero():
    inst = parse_instance('{"rows":["1/2",2],"cols":[1,1,1],"zeros":[[0,0]],"k":2}')
    assert inst.rows.weights == (Fraction(1, 2), Fraction(2))
    assert (0, 0) in inst.zeros
    assert (inst.m, inst.n) == (2, 3)


def test_decimal_forces_float_mode():
    inst = parse_instance('{"rows":[0.5,2],"cols":[1,1],"k":1}')
    assert not inst.exact
    assert all(isinstance(w, float) for w in inst.rows.weights + inst.cols.weights)


@pytest.mark.parametrize(
    "doc, path",
    [
        ('{"rows":[1],"cols":[1],"zeros":[],"k":2}', "k"),
        ('{"rows":[1,0],"cols":[1,1],"k":1}', "rows[1]"),
        ('{"rows":[1,"-1/2"],"cols":[1,1],"k":1}', "rows[1]"),
        ('{"rows":[1,1],"cols":[1,1],"zeros":[[0,0],[0,0]],"k":1}', "zeros[1]"),
        ('{"rows":[1,1],"cols":[1,1],"zeros":[[0,5]],"k":1}', "zeros[0]"),
        ('{"rows":[1,1],"cols":[1,1],"zeros":[[0]],"k":1}', "zeros[0]"),
        ('{"rows":[1,1],"cols":["x"],"k":1}', "cols[0]"),
        ('{"rows":[1,1],"k":1}', "cols"),
        ('{"rows":[1,1],"cols":[1],"k":true}', "k"),
        ('[1, 2]', "$"),
        ('{"rows": [1', "$"),
    ],
)
def test_parse_errors_carry_field_path(doc, path):
    with pytest.raises(InstanceError) as err:
        parse_instance(doc)
    assert err.value.path == path


def test_subset_weight_examples():
    S = WeightedSet.uniform(3)
    assert subset_weight(S, {0, 2}) == 2
    assert subset_weight(S, set()) == 0
    W = WeightedSet((Fraction(1, 2), Fraction(2), Fraction(3)))
    assert subset_weight(W, range(3)) == Fraction(11, 2)
    assert subset_weight(W, 0b101) == Fraction(7, 2)


def test_subset_weight_rejects_foreign_element():
    with pytest.raises(ValueError):
        subset_weight(WeightedSet.uniform(2), {2})


def test_weighted_set_validation():
    with pytest.raises(InstanceError):
        WeightedSet((Fraction(1), Fraction(0)))
    with pytest.raises(InstanceError):
        WeightedSet((Fraction(1), Fraction(1)), labels=(3, 3))


def test_parse_scalar_forms():
    assert parse_scalar(3) == 3
    assert parse_scalar("6/4") == Fraction(3, 2)
    assert parse_scalar(" -2 ") == -2
    assert isinstance(parse_scalar(0.25), float)
    with pytest.raises(InstanceError):
        parse_scalar("1/0")
    with pytest.raises(InstanceError):
        parse_scalar("0.5")


weights = st.lists(st.fractions(min_value=Fraction(1, 20), max_value=20), min_size=1, max_size=8)


@given(weights, st.data())
def test_complement_adds_up_exactly(ws, data):
    S = WeightedSet(tuple(ws))
    mask = data.draw(st.integers(0, S.full_mask))
    assert subset_weight(S, mask) + complement_weight(S, mask) == S.total


@st.composite
def instances(draw):
    m = draw(st.integers(1, 5))
    n = draw(st.integers(1, 5))
    as_float = draw(st.booleans())
    wgt = st.floats(0.01, 50) if as_float else st.fractions(min_value=Fraction(1, 50), max_value=50)
    rows = draw(st.lists(wgt, min_size=m, max_size=m))
    cols = draw(st.lists(wgt, min_size=n, max_size=n))
    zeros = draw(st.sets(st.tuples(st.integers(0, m - 1), st.integers(0, n - 1))))
    k = draw(st.integers(1, min(m, n)))
    return Instance(WeightedSet(tuple(rows)), WeightedSet(tuple(cols)), ZeroPattern.of(zeros), k)


@given(instances())
def test_serialize_round_trip(inst):
    again = parse_instance(serialize_instance(inst))
    assert again == inst
    assert serialize_instance(again) == serialize_instance(inst)


def test_without_column_reindexes_zeros():
    inst = Instance.build([1, 1], [1, 2, 3], [(0, 0), (1, 2)], 2)
    smaller = inst.without_column(1)
    assert smaller.cols.weights == (1, 3)
    assert set(smaller.zeros.sites) == {(0, 0), (1, 1)}
