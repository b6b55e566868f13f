"""Exact minimum-cost k-assignment and the cover-based matrix reduction.

Three independent routes to the same optimum live here:

* :func:`min_cost_assignment` - successive shortest augmenting paths with
  node potentials (one augmentation per unit of k);
* :func:`solve_by_reduction` - repeated reduction by the column-maximal
  optimal cover of the zeros until a zero-cost k-assignment appears;
* :func:`brute_force_min` / :func:`batch_min_cost` - enumeration of every
  k-assignment, vectorised with numpy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from .instance import Site
from .matching import Cover, column_maximal_cover, rank

ZERO_EPS = 1e-12
COST_ATOL = 1e-9

# batch enumeration is used only while the assignment table stays small
MAX_ENUMERATED = 20_000


@dataclass(frozen=True)
class SolveResult:
    cost: float
    assignment: frozenset[Site]
    row_support: frozenset[int]
    # None when ties were not checked
    generic: bool | None = None


@dataclass(frozen=True)
class ReductionStep:
    cover: Cover
    t: float
    matrix: np.ndarray = field(repr=False, compare=False)

    @property
    def cover_size(self) -> int:
        return self.cover.size


@dataclass
class ReductionTrace:
    k: int
    steps: list[ReductionStep] = field(default_factory=list)

    @property
    def total(self) -> float:
        return math.fsum((self.k - s.cover_size) * s.t for s in self.steps)


def as_cost_matrix(M) -> np.ndarray:
    """Validate and copy a nonnegative 2-d cost matrix."""
    a = np.array(M, dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("cost matrix must be a nonempty 2-d array")
    if not np.all(np.isfinite(a)):
        raise ValueError("cost matrix entries must be finite")
    if np.any(a < 0):
        raise ValueError("cost matrix entries must be nonnegative")
    return a


def _check_k(M: np.ndarray, k: int) -> None:
    if not 1 <= k <= min(M.shape):
        raise ValueError(f"k={k} out of range 1..{min(M.shape)}")


def _ssp(M: np.ndarray, k: int) -> list[int]:
    """k rounds of Dijkstra on the residual graph. Returns ``row_match``."""
    m, n = M.shape
    row_match = [-1] * m
    col_match = [-1] * n
    # potentials for rows, columns and the sink; the source stays at 0
    pot_r = [0.0] * m
    pot_c = [0.0] * n
    pot_t = 0.0
    inf = math.inf
    cost = M.tolist()
    for _ in range(k):
        dist_r = [inf] * m
        dist_c = [inf] * n
        prev_c = [-1] * n  # row that reached the column
        done_r = [False] * m
        done_c = [False] * n
        for i in range(m):
            if row_match[i] < 0:
                dist_r[i] = 0.0 - pot_r[i]
        # dense Dijkstra over rows and columns
        while True:
            best, bi, is_row = inf, -1, True
            for i in range(m):
                if not done_r[i] and dist_r[i] < best:
                    best, bi, is_row = dist_r[i], i, True
            for j in range(n):
                if not done_c[j] and dist_c[j] < best:
                    best, bi, is_row = dist_c[j], j, False
            if bi < 0:
                break
            if is_row:
                done_r[bi] = True
                base = dist_r[bi] + pot_r[bi]
                row = cost[bi]
                for j in range(n):
                    if not done_c[j] and row_match[bi] != j:
                        d = base + row[j] - pot_c[j]
                        if d < dist_c[j]:
                            dist_c[j] = d
                            prev_c[j] = bi
            else:
                done_c[bi] = True
                i = col_match[bi]
                if i >= 0 and not done_r[i]:
                    # backward edge along the matching, reduced cost 0 up to rounding
                    d = dist_c[bi] + pot_c[bi] - cost[i][bi] - pot_r[i]
                    d = max(d, dist_c[bi])
                    if d < dist_r[i]:
                        dist_r[i] = d
        end, dt = -1, inf
        for j in range(n):
            if col_match[j] < 0 and dist_c[j] + pot_c[j] - pot_t < dt:
                dt, end = dist_c[j] + pot_c[j] - pot_t, j
        # augment
        j = end
        while j >= 0:
            i = prev_c[j]
            nxt = row_match[i]
            row_match[i] = j
            col_match[j] = i
            j = nxt
        for i in range(m):
            if dist_r[i] < inf:
                pot_r[i] += dist_r[i]
        for j in range(n):
            if dist_c[j] < inf:
                pot_c[j] += dist_c[j]
        pot_t += dt
    return row_match


def min_cost_assignment(M, k: int, check_ties: bool = False) -> SolveResult:
    """Globally optimal k-assignment by successive shortest paths.

    With ``check_ties`` the result also reports whether the optimal row
    support is unique (``generic``); this costs O(m n) extra solves.
    """
    M = as_cost_matrix(M)
    _check_k(M, k)
    row_match = _ssp(M, k)
    sites = frozenset(Site(i, j) for i, j in enumerate(row_match) if j >= 0)
    cost = math.fsum(M[i, j] for i, j in sites)
    support = frozenset(s.row for s in sites)
    generic = _support_unique(M, k, cost, support) if check_ties else None
    return SolveResult(cost, sites, support, generic)


def _support_unique(M: np.ndarray, k: int, cost: float, support: frozenset[int]) -> bool:
    m = M.shape[0]
    tol = COST_ATOL * max(1.0, cost)
    for i in range(m):
        if i in support:
            # another optimum avoiding row i?
            if m - 1 >= k and _ssp_cost(np.delete(M, i, axis=0), k) <= cost + tol:
                return False
        elif _cost_through_row(M, k, i) <= cost + tol:
            return False
    return True


def _ssp_cost(M: np.ndarray, k: int) -> float:
    return math.fsum(M[i, j] for i, j in enumerate(_ssp(M, k)) if j >= 0)


def _cost_through_row(M: np.ndarray, k: int, i: int) -> float:
    """Cheapest k-assignment that uses row ``i``."""
    best = math.inf
    rest = np.delete(M, i, axis=0)
    for j in range(M.shape[1]):
        if k == 1:
            best = min(best, M[i, j])
            continue
        sub = np.delete(rest, j, axis=1)
        if min(sub.shape) >= k - 1:
            best = min(best, M[i, j] + _ssp_cost(sub, k - 1))
    return best


def zero_sites(M: np.ndarray, eps: float = ZERO_EPS) -> list[Site]:
    scale = max(1.0, float(np.max(M)))
    return [Site(int(i), int(j)) for i, j in zip(*np.nonzero(M <= eps * scale))]


def reduce_once(M, cover: Cover, eps: float = ZERO_EPS) -> tuple[np.ndarray, float]:
    """Reduce ``M`` by an optimal cover of its zeros.

    Uncovered entries drop by ``t`` (the least uncovered entry), doubly
    covered entries rise by ``t``, singly covered entries stay.
    """
    M = as_cost_matrix(M)
    m, n = M.shape
    zeros = zero_sites(M, eps)
    if not cover.is_cover_of(zeros):
        raise ValueError("cover does not cover every zero")
    if cover.size != rank(zeros, m, n):
        raise ValueError("cover is not optimal")
    row_cov = np.zeros(m, dtype=bool)
    col_cov = np.zeros(n, dtype=bool)
    row_cov[list(cover.rows)] = True
    col_cov[list(cover.cols)] = True
    uncovered = ~row_cov[:, None] & ~col_cov[None, :]
    if not uncovered.any():
        raise ValueError("cover leaves no entry uncovered")
    t = float(M[uncovered].min())
    out = M.copy()
    out[uncovered] -= t
    out[row_cov[:, None] & col_cov[None, :]] += t
    scale = max(1.0, float(np.max(M)))
    out[np.abs(out) <= eps * scale] = 0.0
    return out, t


def solve_by_reduction(M, k: int, eps: float = ZERO_EPS) -> tuple[float, ReductionTrace]:
    """Minimum k-assignment cost by iterated reduction with column-maximal covers.

    Each step contributes ``(k - |cover|) * t``; the loop stops once the
    zeros have rank at least k.
    """
    M = as_cost_matrix(M)
    _check_k(M, k)
    m, n = M.shape
    trace = ReductionTrace(k)
    # each step raises the zero rank or grows the cover's row set
    for _ in range((m + 1) * (n + 1) * (k + 1)):
        zeros = zero_sites(M, eps)
        if rank(zeros, m, n) >= k:
            return trace.total, trace
        cover = column_maximal_cover(zeros, m, n)
        M, t = reduce_once(M, cover, eps)
        trace.steps.append(ReductionStep(cover, t, M))
    raise RuntimeError("reduction did not terminate")


def optimal_row_support(M, k: int) -> frozenset[int]:
    """Rows met by the optimal k-assignment found."""
    return min_cost_assignment(M, k).row_support


@lru_cache(maxsize=None)
def assignment_table(m: int, n: int, k: int) -> np.ndarray:
    """Every k-assignment of an m x n grid as flat indices, shape (count, k).

    Order: row sets in lexicographic order, then column tuples in
    lexicographic order.
    """
    rows_list = list(combinations(range(m), k))
    cols_list = list(permutations(range(n), k))
    out = np.empty((len(rows_list) * len(cols_list), k), dtype=np.intp)
    idx = 0
    for rows in rows_list:
        r = np.array(rows) * n
        for cols in cols_list:
            out[idx] = r + np.array(cols)
            idx += 1
    out.setflags(write=False)
    return out


def count_assignments(m: int, n: int, k: int) -> int:
    return math.comb(m, k) * math.perm(n, k)


def brute_force_min(M, k: int) -> SolveResult:
    """Minimum by enumerating all k-assignments (first minimum in table order)."""
    M = as_cost_matrix(M)
    _check_k(M, k)
    costs, choice = batch_min_cost(M[None], k)
    m, n = M.shape
    flat = assignment_table(m, n, k)[choice[0]]
    sites = frozenset(Site(int(f) // n, int(f) % n) for f in flat)
    return SolveResult(float(costs[0]), sites, frozenset(s.row for s in sites))


def batch_min_cost(mats: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Enumerated minima of a stack of matrices, shape (N, m, n).

    Returns the minimum costs and the index of the minimizing assignment
    in :func:`assignment_table`.
    """
    N, m, n = mats.shape
    if count_assignments(m, n, k) > MAX_ENUMERATED:
        raise ValueError(f"{count_assignments(m, n, k)} assignments exceed the enumeration limit")
    table = assignment_table(m, n, k)
    flat = mats.reshape(N, m * n)
    costs = flat[:, table[:, 0]].copy()
    for c in range(1, k):
        costs += flat[:, table[:, c]]
    choice = np.argmin(costs, axis=1)
    return costs[np.arange(N), choice], choice
