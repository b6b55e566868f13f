"""Ideals of partial (k-1)-covers and Möbius values to the artificial top.

A pair of file sets ``(X, Y)`` is stored as two bitmasks. Where a single
key is handy, the pair is packed as ``X | Y << m``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator, NamedTuple

from .instance import Instance, members, popcount
from .matching import rank_masks

# Full-ideal operations refuse instances beyond these sizes.
MAX_ENUM_FILES = 16
MAX_ENUM_K = 8


class CapExceeded(ValueError):
    """Instance is too large for exhaustive ideal enumeration."""


class FileSetPair(NamedTuple):
    rows: int
    cols: int

    @property
    def size(self) -> int:
        return popcount(self.rows) + popcount(self.cols)

    @classmethod
    def of(cls, rows: Iterable[int] = (), cols: Iterable[int] = ()) -> FileSetPair:
        r = c = 0
        for i in rows:
            r |= 1 << i
        for j in cols:
            c |= 1 << j
        return cls(r, c)


@dataclass(frozen=True)
class CoverIdeal:
    """A downward-closed family of file sets.

    ``kind`` is ``"pairs"`` (members are :class:`FileSetPair`) or ``"rows"``
    (members are row bitmasks).
    """

    members: frozenset
    kind: str = "pairs"

    def __contains__(self, item) -> bool:
        return item in self.members

    def __iter__(self) -> Iterator:
        if self.kind == "pairs":
            return iter(sorted(self.members, key=lambda p: (p.size, p.cols, p.rows)))
        return iter(sorted(self.members, key=lambda x: (popcount(x), x)))

    def __len__(self) -> int:
        return len(self.members)

    def is_downward_closed(self) -> bool:
        for x in self.members:
            if self.kind == "pairs":
                below = [FileSetPair(x.rows & ~(1 << i), x.cols) for i in members(x.rows)]
                below += [FileSetPair(x.rows, x.cols & ~(1 << j)) for j in members(x.cols)]
            else:
                below = [x & ~(1 << i) for i in members(x)]
            if any(b not in self.members for b in below):
                return False
        return True


def check_caps(m: int, n: int, k: int) -> None:
    if m + n > MAX_ENUM_FILES or k > MAX_ENUM_K:
        raise CapExceeded(
            f"{m}x{n} with k={k} exceeds the enumeration cap "
            f"(m+n <= {MAX_ENUM_FILES}, k <= {MAX_ENUM_K})"
        )


class _Membership:
    """Memoized partial-cover test for one zero pattern."""

    def __init__(self, adj: list[int], m: int, n: int, k: int):
        self.adj, self.m, self.n, self.k = adj, m, n, k
        self.full_rows = (1 << m) - 1
        self.full_cols = (1 << n) - 1
        self._memo: dict[tuple[int, int], bool] = {}

    def __call__(self, rows: int, cols: int) -> bool:
        key = (rows, cols)
        hit = self._memo.get(key)
        if hit is None:
            budget = self.k - 1 - popcount(rows) - popcount(cols)
            hit = budget >= 0 and (
                rank_masks(self.adj, self.n, self.full_rows & ~rows, self.full_cols & ~cols) <= budget
            )
            self._memo[key] = hit
        return hit


def _membership(inst: Instance) -> _Membership:
    return _Membership(inst.zeros.row_masks(inst.m), inst.m, inst.n, inst.k)


def is_partial_cover(inst: Instance, pair: FileSetPair) -> bool:
    """True iff the files in ``pair`` extend to a cover of the zeros by k-1 files."""
    rows, cols = pair
    if rows >> inst.m or cols >> inst.n or rows < 0 or cols < 0:
        raise ValueError(f"pair {pair} not valid for a {inst.m}x{inst.n} instance")
    return _membership(inst)(rows, cols)


def _grow(root_ok: bool, extend, start) -> set:
    """Upward closure search: every member is reachable by adding one file at a time."""
    if not root_ok:
        return set()
    found = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for y in extend(x):
                if y not in found:
                    found.add(y)
                    nxt.append(y)
        frontier = nxt
    return found


def enumerate_ideal(inst: Instance) -> CoverIdeal:
    """All partial (k-1)-covers of the zeros, as row/column pairs."""
    m, n = inst.m, inst.n
    check_caps(m, n, inst.k)
    ok = _membership(inst)

    def extend(p: FileSetPair):
        for i in range(m):
            if not p.rows >> i & 1 and ok(p.rows | 1 << i, p.cols):
                yield FileSetPair(p.rows | 1 << i, p.cols)
        for j in range(n):
            if not p.cols >> j & 1 and ok(p.rows, p.cols | 1 << j):
                yield FileSetPair(p.rows, p.cols | 1 << j)

    return CoverIdeal(frozenset(_grow(ok(0, 0), extend, FileSetPair(0, 0))), "pairs")


def enumerate_row_ideal(zeros: Iterable[tuple[int, int]], m: int, n: int, k: int) -> CoverIdeal:
    """All sets of rows that are partial (k-1)-covers of ``zeros``."""
    check_caps(m, n, k)
    adj = [0] * m
    for r, c in zeros:
        if not (0 <= r < m and 0 <= c < n):
            raise ValueError(f"site ({r}, {c}) outside a {m}x{n} grid")
        adj[r] |= 1 << c
    ok = _Membership(adj, m, n, k)

    def extend(x: int):
        for i in range(m):
            if not x >> i & 1 and ok(x | 1 << i, 0):
                yield x | 1 << i

    return CoverIdeal(frozenset(_grow(ok(0, 0), extend, 0)), "rows")


def ideal_delete(ideal: CoverIdeal, i: int) -> CoverIdeal:
    """Members of a row ideal that do not contain row ``i``."""
    bit = 1 << i
    return CoverIdeal(frozenset(x for x in ideal.members if not x & bit), ideal.kind)


def ideal_quotient(ideal: CoverIdeal, i: int) -> CoverIdeal:
    """Row sets ``X`` with ``X | {i}`` in the ideal."""
    bit = 1 << i
    out = set()
    for x in ideal.members:
        if x & bit:
            out.add(x)
            out.add(x & ~bit)
    return CoverIdeal(frozenset(out), ideal.kind)


def _submasks(mask: int) -> Iterator[int]:
    """Proper submasks of ``mask``, including 0."""
    s = (mask - 1) & mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def _mobius_packed(packed: Iterable[int], base: int = 0) -> dict[int, int]:
    """mu(x, top) for every x in an up-closed-within-ideal family.

    ``packed`` holds the members above ``base``. Uses
    mu(x, top) = -1 - sum of mu(y, top) over members y strictly above x,
    filled in from the largest members down.
    """
    above = defaultdict(int)
    mu = {}
    for q in sorted(packed, key=popcount, reverse=True):
        mu[q] = -1 - above[q]
        free = q & ~base
        if free:
            for s in _submasks(free):
                above[base | s] += mu[q]
    return mu


def _pack(p: FileSetPair, m: int) -> int:
    return p.rows | p.cols << m


def mobius_table(ideal: CoverIdeal, m: int) -> dict[FileSetPair, int]:
    """Möbius value to the top element for every member of a pair ideal.

    ``m`` is the number of rows (needed to pack pairs into one key).
    """
    row_mask = (1 << m) - 1
    mu = _mobius_packed(_pack(p, m) for p in ideal.members)
    return {FileSetPair(q & row_mask, q >> m): v for q, v in mu.items()}


def mobius_to_top(inst: Instance, pair: FileSetPair) -> int:
    """mu(pair, top) in the partial-cover poset with an artificial top.

    Only the interval above ``pair`` is explored.
    """
    m, n = inst.m, inst.n
    ok = _membership(inst)
    if not ok(*pair):
        raise ValueError(f"{pair} is not a partial {inst.k - 1}-cover")

    def extend(p: FileSetPair):
        for i in range(m):
            if not p.rows >> i & 1 and ok(p.rows | 1 << i, p.cols):
                yield FileSetPair(p.rows | 1 << i, p.cols)
        for j in range(n):
            if not p.cols >> j & 1 and ok(p.rows, p.cols | 1 << j):
                yield FileSetPair(p.rows, p.cols | 1 << j)

    upper = _grow(True, extend, FileSetPair(*pair))
    base = _pack(FileSetPair(*pair), m)
    mu = _mobius_packed((_pack(p, m) for p in upper), base)
    return mu[base]


def truncated_boolean_mobius(N: int, k: int) -> int:
    """mu(bottom, top) for ranks 0..k-1 of the Boolean lattice on N atoms plus a top."""
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N, got N={N}, k={k}")
    return (-1) ** k * comb(N - 1, k - 1)
