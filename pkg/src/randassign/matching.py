"""Bipartite matching over zero patterns: rank, maximum matchings, König covers.

A zero pattern is any iterable of ``(row, col)`` sites in an ``m x n`` grid.
Rows are searched in ascending order and each row tries its columns in
ascending order, which makes every result deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .instance import Site, members


@dataclass(frozen=True)
class Cover:
    """A set of files (rows and columns)."""

    rows: frozenset[int] = frozenset()
    cols: frozenset[int] = frozenset()

    @property
    def size(self) -> int:
        return len(self.rows) + len(self.cols)

    def covers(self, site: tuple[int, int]) -> bool:
        return site[0] in self.rows or site[1] in self.cols

    def is_cover_of(self, zeros: Iterable[tuple[int, int]]) -> bool:
        return all(self.covers(s) for s in zeros)


def _row_masks(zeros: Iterable[tuple[int, int]], m: int, n: int) -> list[int]:
    masks = [0] * m
    for r, c in zeros:
        if not (0 <= r < m and 0 <= c < n):
            raise ValueError(f"site ({r}, {c}) outside a {m}x{n} grid")
        masks[r] |= 1 << c
    return masks


def _kuhn(adj: list[int], n: int, row_mask: int = -1, col_mask: int = -1) -> list[int]:
    """Maximum matching on bitmask adjacency. Returns ``match_col[c] = row or -1``.

    Only rows in ``row_mask`` and columns in ``col_mask`` take part.
    """
    match_col = [-1] * n

    def augment(r: int, seen: list[int]) -> bool:
        for c in members(adj[r] & col_mask & ~seen[0]):
            seen[0] |= 1 << c
            if match_col[c] < 0 or augment(match_col[c], seen):
                match_col[c] = r
                return True
        return False

    for r in range(len(adj)):
        if row_mask >> r & 1 and adj[r] & col_mask:
            augment(r, [0])
    return match_col


def rank_masks(adj: list[int], n: int, row_mask: int = -1, col_mask: int = -1) -> int:
    """Rank of the zeros restricted to ``row_mask`` x ``col_mask``."""
    return sum(1 for r in _kuhn(adj, n, row_mask, col_mask) if r >= 0)


def rank(zeros: Iterable[tuple[int, int]], m: int, n: int) -> int:
    """Size of the largest independent subset of ``zeros``."""
    return rank_masks(_row_masks(zeros, m, n), n)


def maximum_matching(zeros: Iterable[tuple[int, int]], m: int, n: int) -> frozenset[Site]:
    match_col = _kuhn(_row_masks(zeros, m, n), n)
    return frozenset(Site(r, c) for c, r in enumerate(match_col) if r >= 0)


def _konig(adj: list[int], m: int, n: int, from_rows: bool) -> Cover:
    match_col = _kuhn(adj, n)
    match_row = [-1] * m
    for c, r in enumerate(match_col):
        if r >= 0:
            match_row[r] = c
    col_adj = [0] * n
    for r in range(m):
        for c in members(adj[r]):
            col_adj[c] |= 1 << r

    # Alternating search: leave the start side along any zero, come back
    # along matching edges. Starting from unmatched rows, the rows reached
    # are exactly those missed by some maximum matching, so the rows left
    # unreached form the largest row set of any optimal cover.
    if from_rows:
        side_adj, match_self, match_other, n_self = adj, match_row, match_col, m
    else:
        side_adj, match_self, match_other, n_self = col_adj, match_col, match_row, n
    reached_self = 0
    reached_other = 0
    stack = [v for v in range(n_self) if match_self[v] < 0]
    for v in stack:
        reached_self |= 1 << v
    while stack:
        v = stack.pop()
        for u in members(side_adj[v] & ~reached_other):
            reached_other |= 1 << u
            w = match_other[u]
            if w >= 0 and not reached_self >> w & 1:
                reached_self |= 1 << w
                stack.append(w)
    self_files = frozenset(v for v in range(n_self) if not reached_self >> v & 1)
    other_files = frozenset(members(reached_other))
    if from_rows:
        return Cover(rows=self_files, cols=other_files)
    return Cover(rows=other_files, cols=self_files)


def row_maximal_cover(zeros: Iterable[tuple[int, int]], m: int, n: int) -> Cover:
    """Optimal cover holding every row that lies in some optimal cover."""
    return _konig(_row_masks(zeros, m, n), m, n, from_rows=True)


def column_maximal_cover(zeros: Iterable[tuple[int, int]], m: int, n: int) -> Cover:
    """Optimal cover holding every column that lies in some optimal cover."""
    return _konig(_row_masks(zeros, m, n), m, n, from_rows=False)


def r_of(zeros: Iterable[tuple[int, int]], m: int, n: int) -> frozenset[int]:
    """Rows of the row-maximal optimal cover."""
    return row_maximal_cover(zeros, m, n).rows
