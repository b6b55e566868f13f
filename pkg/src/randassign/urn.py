"""Weighted urn process: reach probabilities, exit sets and exit times.

Balls leave the urn at independent exponential times whose rates are the
ball weights, so the draw order is weighted sampling without replacement.
Everything exact here is generic over the scalar type of the weights.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .cover_poset import CoverIdeal, FileSetPair
from .instance import Instance, Scalar, WeightedSet, members, to_mask


class Urn:
    """Memoized reach probabilities of one weighted set, keyed by bitmask."""

    def __init__(self, S: WeightedSet):
        self.S = S
        self.size = len(S)
        self.full = S.full_mask
        self._weight: dict[int, Scalar] = {}
        self._reach: dict[int, Scalar] = {0: 1}

    def weight(self, mask: int) -> Scalar:
        w = self._weight.get(mask)
        if w is None:
            w = sum((self.S.weights[i] for i in members(mask)), 0 * self.S.weights[0])
            self._weight[mask] = w
        return w

    def complement_weight(self, mask: int) -> Scalar:
        return self.weight(self.full & ~mask)

    def reach(self, mask: int) -> Scalar:
        """Probability the draw sequence passes through ``mask``."""
        p = self._reach.get(mask)
        if p is None:
            p = 0
            for i in members(mask):
                prev = mask & ~(1 << i)
                p += self.reach(prev) * self.S.weights[i] / self.complement_weight(prev)
            self._reach[mask] = p
        return p


def reach_probability(S: WeightedSet, X: int | Iterable[int]) -> Scalar:
    """Probability that every ball of ``X`` is drawn before every other ball."""
    return Urn(S).reach(to_mask(X, len(S)))


def _check_row_ideal(S: WeightedSet, ideal: CoverIdeal) -> None:
    if ideal.kind != "rows":
        raise ValueError("expected a one-dimensional ideal")
    if 0 not in ideal:
        raise ValueError("ideal must contain the empty set")
    if S.full_mask in ideal:
        raise ValueError("ideal must not contain the whole set")


def exit_probability(S: WeightedSet, ideal: CoverIdeal, i: int) -> Scalar:
    """Probability that ball ``i`` belongs to the first drawn set outside ``ideal``."""
    _check_row_ideal(S, ideal)
    urn = Urn(S)
    bit = 1 << i
    total = 0
    for X in ideal.members:
        if not X & bit:
            total += S.weights[i] * urn.reach(X) / urn.complement_weight(X)
    return total


def exit_probability_recursive(S: WeightedSet, ideal: CoverIdeal, i0: int) -> Scalar:
    """Same quantity as :func:`exit_probability`, by conditioning on the first draw.

    Quotients ``ideal / i`` live on the same ground set. A quotient is
    closed under toggling ``i``, so dividing by ``i`` again returns the same
    family; those self-referential terms are moved to the left-hand side
    before dividing through.
    """
    memo: dict[frozenset, Scalar] = {}
    total_w = S.total

    def prob(fam: frozenset) -> Scalar:
        if 0 not in fam:
            # empty family: the walk is already outside
            return 0
        hit = memo.get(fam)
        if hit is not None:
            return hit
        numer = S.weights[i0]
        denom = total_w
        for i in range(len(S)):
            if i == i0:
                continue
            bit = 1 << i
            quotient = frozenset(x | bit for x in fam if x & bit)
            quotient = quotient | frozenset(x & ~bit for x in quotient)
            if quotient == fam:
                denom -= S.weights[i]
            else:
                numer += S.weights[i] * prob(quotient)
        p = numer / denom
        memo[fam] = p
        return p

    _check_row_ideal(S, ideal)
    return prob(ideal.members)


def expected_exit_time(S: WeightedSet, ideal: CoverIdeal) -> Scalar:
    """Expected time the walk spends inside ``ideal``."""
    if S.full_mask in ideal:
        raise ValueError("exit time is infinite when the ideal holds the whole set")
    urn = Urn(S)
    total = 0
    for X in ideal.members:
        total += urn.reach(X) / urn.complement_weight(X)
    return total


def leave_ideal_sum(S: WeightedSet, ideal: CoverIdeal) -> Scalar:
    """Total probability over all ways of stepping out of ``ideal``; equals 1."""
    _check_row_ideal(S, ideal)
    urn = Urn(S)
    total = 0
    for X in ideal.members:
        for i in range(len(S)):
            if not X >> i & 1 and (X | 1 << i) not in ideal:
                total += S.weights[i] * urn.reach(X) / urn.complement_weight(X)
    return total


def expected_exit_time_2d(inst: Instance, ideal: CoverIdeal) -> Scalar:
    """Expected area of the time plane on which the product walk stays in ``ideal``."""
    full = FileSetPair(inst.rows.full_mask, inst.cols.full_mask)
    if full in ideal:
        raise ValueError("exit time is infinite when the ideal holds (R, C)")
    if not ideal.is_downward_closed():
        raise ValueError("ideal is not downward closed")
    ur, uc = Urn(inst.rows), Urn(inst.cols)
    total = 0
    for X, Y in ideal.members:
        total += ur.reach(X) * uc.reach(Y) / (ur.complement_weight(X) * uc.complement_weight(Y))
    return total


def simulate_urn(S: WeightedSet, rng_seed: int | np.random.Generator) -> list[tuple[int, float]]:
    """One continuous-time urn run: ``(label, leave time)`` in draw order.

    Times are drawn by inverse transform, ``-log(U) / weight``. Equal times
    are ordered by label.
    """
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    u = 1.0 - rng.random(len(S))  # in (0, 1]
    rates = np.array([float(w) for w in S.weights])
    times = -np.log(u) / rates
    order = sorted(range(len(S)), key=lambda i: (times[i], S.labels[i]))
    return [(S.labels[i], float(times[i])) for i in order]
