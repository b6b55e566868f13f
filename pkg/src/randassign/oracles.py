"""Brute-force reference computations for small cases.

Nothing here is clever on purpose: these are the slow, obviously correct
routes the fast code is checked against.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Iterator

from .instance import Scalar, WeightedSet


def independent(sites: Iterable[tuple[int, int]]) -> bool:
    sites = list(sites)
    return len({r for r, _ in sites}) == len(sites) == len({c for _, c in sites})


def brute_rank(zeros: Iterable[tuple[int, int]]) -> int:
    zeros = sorted(set(zeros))
    for size in range(len(zeros), 0, -1):
        if any(independent(sub) for sub in combinations(zeros, size)):
            return size
    return 0


def all_covers(zeros: Iterable[tuple[int, int]], m: int, n: int) -> Iterator[tuple[frozenset, frozenset]]:
    """Every (rows, cols) file set covering ``zeros``."""
    zeros = list(zeros)
    for rmask in range(1 << m):
        rows = frozenset(i for i in range(m) if rmask >> i & 1)
        for cmask in range(1 << n):
            cols = frozenset(j for j in range(n) if cmask >> j & 1)
            if all(r in rows or c in cols for r, c in zeros):
                yield rows, cols


def optimal_covers(zeros: Iterable[tuple[int, int]], m: int, n: int) -> list[tuple[frozenset, frozenset]]:
    covers = list(all_covers(zeros, m, n))
    best = min(len(r) + len(c) for r, c in covers)
    return [(r, c) for r, c in covers if len(r) + len(c) == best]


def all_assignments(M, k: int) -> Iterator[tuple[float, frozenset]]:
    m, n = len(M), len(M[0])
    for rows in combinations(range(m), k):
        for cols in permutations(range(n), k):
            sites = frozenset(zip(rows, cols))
            yield sum(M[i][j] for i, j in sites), sites


def optimal_assignments(M, k: int, tol: float = 1e-9) -> tuple[float, list[frozenset]]:
    table = list(all_assignments(M, k))
    best = min(c for c, _ in table)
    return best, [s for c, s in table if c <= best + tol]


def brute_is_partial_cover(zeros, m: int, n: int, k: int, rows: frozenset, cols: frozenset) -> bool:
    """Does (rows, cols) sit inside some cover made of exactly k-1 files?"""
    if len(rows) + len(cols) > k - 1:
        return False
    return any(
        rows <= r and cols <= c and len(r) + len(c) <= k - 1 for r, c in all_covers(zeros, m, n)
    )


def all_ideals(size: int) -> Iterator[frozenset[int]]:
    """Every downward-closed family of subsets (as bitmasks) of ``size`` elements."""
    order = sorted(range(1 << size), key=lambda x: (bin(x).count("1"), x))

    def rec(idx: int, chosen: set[int]):
        if idx == len(order):
            yield frozenset(chosen)
            return
        x = order[idx]
        yield from rec(idx + 1, chosen)
        if all((x & ~(1 << i)) in chosen for i in range(size) if x >> i & 1):
            chosen.add(x)
            yield from rec(idx + 1, chosen)
            chosen.discard(x)

    yield from rec(0, set())


def draw_orders(S: WeightedSet) -> Iterator[tuple[tuple[int, ...], Scalar]]:
    """Every draw order of the urn with its probability."""
    total = S.total
    for perm in permutations(range(len(S))):
        p: Scalar = Fraction(1) if S.exact else 1.0
        left = total
        for i in perm:
            p *= S.weights[i] / left
            left -= S.weights[i]
        yield perm, p


def exit_set_distribution(S: WeightedSet, ideal: frozenset[int]) -> dict[int, Scalar]:
    """Law of the first prefix of the draw order outside ``ideal``."""
    out: dict[int, Scalar] = {}
    for perm, p in draw_orders(S):
        x = 0
        for i in perm:
            x |= 1 << i
            if x not in ideal:
                out[x] = out.get(x, 0) + p
                break
    return out
