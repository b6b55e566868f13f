from collections import Counter
from fractions import Fraction
from itertools import combinations
from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from randassign import oracles
from randassign.cover_poset import CoverIdeal, FileSetPair, enumerate_ideal
from randassign.instance import Instance, WeightedSet
from randassign.urn import (
    Urn,
    exit_probability,
    exit_probability_recursive,
    expected_exit_time,
    expected_exit_time_2d,
    leave_ideal_sum,
    reach_probability,
    simulate_urn,
)

F = Fraction
W3 = WeightedSet((F(2), F(3), F(5)))


def rows_ideal(*sets):
    return CoverIdeal(frozenset(sum(1 << i for i in s) for s in sets), "rows")


def test_reach_probability_three_balls():
    w1, w2, w3 = W3.weights
    total = w1 + w2 + w3
    assert reach_probability(W3, ()) == 1
    assert reach_probability(W3, (0, 1, 2)) == 1
    assert reach_probability(W3, (0,)) == w1 / total
    assert reach_probability(W3, (0, 1)) == w1 * w2 / (total * (w2 + w3)) + w1 * w2 / (total * (w1 + w3))


def test_exit_probability_examples():
    S = WeightedSet((F(1), F(2), F(4)))
    for i in range(3):
        assert exit_probability(S, rows_ideal(()), i) == S.weights[i] / S.total
    unit2 = WeightedSet.uniform(2)
    ideal = rows_ideal((), (1,))
    assert exit_probability(unit2, ideal, 0) == 1
    assert exit_probability_recursive(unit2, ideal, 0) == 1
    assert exit_probability(unit2, ideal, 1) == F(1, 2)


def test_exit_probability_rejects_bad_ideals():
    S = WeightedSet.uniform(2)
    with pytest.raises(ValueError):
        exit_probability(S, CoverIdeal(frozenset({1}), "rows"), 0)
    with pytest.raises(ValueError):
        exit_probability(S, rows_ideal((), (0,), (1,), (0, 1)), 0)
    with pytest.raises(ValueError):
        exit_probability(S, CoverIdeal(frozenset({FileSetPair(0, 0)}), "pairs"), 0)


def test_expected_exit_time_examples():
    S = WeightedSet((F(1), F(3)))
    assert expected_exit_time(S, rows_ideal(())) == F(1, 4)
    for n in range(1, 6):
        proper = [c for r in range(n) for c in combinations(range(n), r)]
        harmonic = sum(F(1, j) for j in range(1, n + 1))
        assert expected_exit_time(WeightedSet.uniform(n), rows_ideal(*proper)) == harmonic
    assert expected_exit_time(WeightedSet.uniform(2), rows_ideal((), (1,))) == 1


def test_expected_exit_time_2d_examples():
    inst = Instance.build([2, 3], [1, 5], (), 2)
    assert expected_exit_time_2d(inst, CoverIdeal(frozenset({FileSetPair(0, 0)}))) == F(1, 30)
    unit = Instance.build([1, 1], [1, 1], (), 2)
    assert expected_exit_time_2d(unit, enumerate_ideal(unit)) == F(5, 4)
    partial = CoverIdeal(frozenset({FileSetPair(0, 0), FileSetPair(1, 0), FileSetPair(0, 1)}))
    assert expected_exit_time_2d(unit, partial) == F(3, 4)


def test_three_quarters_against_survival_integral():
    scipy_integrate = pytest.importorskip("scipy.integrate")
    # min(X, Y + Z) for iid rate-one exponentials survives past t with prob (1+t)e^{-2t}
    area, _ = scipy_integrate.quad(lambda t: (1 + t) * np.exp(-2 * t), 0, np.inf)
    assert area == pytest.approx(0.75, abs=1e-12)


def test_expected_exit_time_2d_rejects_open_families():
    unit = Instance.build([1, 1], [1, 1], (), 2)
    with pytest.raises(ValueError):
        expected_exit_time_2d(unit, CoverIdeal(frozenset({FileSetPair(1, 0)})))


def _within(freq, p, n, n_se=3.0):
    return abs(freq - p) <= n_se * sqrt(p * (1 - p) / n)


def test_simulated_first_draw_is_uniform():
    S = WeightedSet.uniform(4)
    rng = np.random.default_rng(11)
    trials = 100_000
    firsts = Counter(simulate_urn(S, rng)[0][0] for _ in range(trials))
    assert _within(firsts[0] / trials, 0.25, trials)


def test_simulated_exponential_race():
    S = WeightedSet((F(1), F(2)))
    rng = np.random.default_rng(12)
    trials = 50_000
    wins = sum(simulate_urn(S, rng)[0][0] == 1 for _ in range(trials))
    assert _within(wins / trials, 2 / 3, trials)


def test_simulated_reach_frequencies():
    S = WeightedSet((F(1), F(2), F(4)))
    rng = np.random.default_rng(13)
    trials = 40_000
    prefixes = Counter()
    for _ in range(trials):
        order = [label for label, _ in simulate_urn(S, rng)]
        prefixes[frozenset(order[:1])] += 1
        prefixes[frozenset(order[:2])] += 1
    urn = Urn(S)
    for X, count in prefixes.items():
        p = float(urn.reach(sum(1 << i for i in X)))
        assert _within(count / trials, p, trials)


def test_simulation_is_seeded_and_sorted():
    S = WeightedSet((F(1), F(2), F(3)))
    a, b = simulate_urn(S, 5), simulate_urn(S, 5)
    assert a == b
    times = [t for _, t in a]
    assert times == sorted(times)


IDEALS = {size: list(oracles.all_ideals(size)) for size in range(1, 5)}
rational = st.fractions(min_value=F(1, 9), max_value=9)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.data())
def test_exit_routes_and_leave_identity(size, data):
    S = WeightedSet(tuple(data.draw(st.lists(rational, min_size=size, max_size=size))))
    fam = data.draw(st.sampled_from([f for f in IDEALS[size] if 0 in f and S.full_mask not in f]))
    ideal = CoverIdeal(fam, "rows")
    assert leave_ideal_sum(S, ideal) == 1
    law = oracles.exit_set_distribution(S, fam)
    expected_size = sum(p * bin(x).count("1") for x, p in law.items())
    by_ball = [exit_probability(S, ideal, i) for i in range(size)]
    assert sum(by_ball) == expected_size
    for i in range(size):
        assert by_ball[i] == exit_probability_recursive(S, ideal, i)
        assert by_ball[i] == sum((p for x, p in law.items() if x >> i & 1), F(0))


@settings(max_examples=40, deadline=None)
@given(st.lists(rational, min_size=1, max_size=6))
def test_levels_normalize(ws):
    S = WeightedSet(tuple(ws))
    urn = Urn(S)
    for level in range(len(ws) + 1):
        assert sum(urn.reach(x) for x in range(1 << len(ws)) if bin(x).count("1") == level) == 1
