"""Randomized property suites over small instances.

Each suite returns a :class:`SuiteResult`; a suite passes when no check
failed. Exact identities are compared with ``==`` on fractions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cover_poset import CoverIdeal, enumerate_row_ideal, ideal_quotient
from .formulas import (
    expected_min_bcr,
    expected_min_combinatorial,
    expected_min_cs,
    expected_min_probabilistic,
)
from .instance import Instance, WeightedSet, ZeroPattern
from .matching import r_of, rank, row_maximal_cover, column_maximal_cover
from . import oracles
from .solver import brute_force_min, min_cost_assignment, solve_by_reduction
from .urn import Urn, exit_probability, exit_probability_recursive, leave_ideal_sum

SUITES = ("equivalence", "urn", "nesting", "solver", "structure")


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, what: str) -> None:
        self.checks += 1
        if not ok and len(self.failures) < 50:
            self.failures.append(what)

    def to_dict(self) -> dict:
        return {"suite": self.name, "checks": self.checks, "passed": self.passed, "failures": self.failures}


def random_weights(rng: random.Random, size: int, max_part: int = 9) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(1, max_part), rng.randint(1, max_part)) for _ in range(size))


def random_pattern(rng: random.Random, m: int, n: int) -> frozenset[tuple[int, int]]:
    density = rng.choice((0.1, 0.2, 0.3, 0.5))
    return frozenset((i, j) for i in range(m) for j in range(n) if rng.random() < density)


def shapes(max_size: int):
    for m in range(1, max_size):
        for n in range(1, max_size - m + 1):
            yield m, n


def check_equivalence(inst: Instance, result: SuiteResult) -> None:
    prob = expected_min_probabilistic(inst).value
    comb_ = expected_min_combinatorial(inst).value
    label = f"{inst.m}x{inst.n} k={inst.k} zeros={sorted(inst.zeros.sites)}"
    result.check(prob == comb_, f"probabilistic != combinatorial on {label}")
    if not len(inst.zeros):
        result.check(prob == expected_min_bcr(inst).value, f"bcr mismatch on {label}")


def equivalence_suite(
    max_size: int = 6, seed: int = 0, weight_draws: int = 5, pattern_draws: int = 5
) -> SuiteResult:
    """Both main evaluators agree exactly; closed forms agree on their domains."""
    rng = random.Random(seed)
    result = SuiteResult("equivalence")
    for m, n in shapes(max_size):
        patterns = [frozenset()] + [random_pattern(rng, m, n) for _ in range(pattern_draws)]
        for k in range(1, min(m, n) + 1):
            unit = Instance.build([1] * m, [1] * n, (), k)
            bcr = expected_min_bcr(unit).value
            result.check(bcr == expected_min_cs(m, n, k).value, f"bcr != cs at {m}x{n} k={k}")
            for zeros in patterns:
                for _ in range(weight_draws):
                    inst = Instance(
                        WeightedSet(random_weights(rng, m)), WeightedSet(random_weights(rng, n)), ZeroPattern.of(zeros), k
                    )
                    check_equivalence(inst, result)
    return result


def urn_suite(seed: int = 0, max_elements: int = 4, weight_draws: int = 3) -> SuiteResult:
    """Leave-ideal identity, both exit-probability routes, level normalization."""
    rng = random.Random(seed)
    result = SuiteResult("urn")
    for size in range(1, max_elements + 1):
        full = (1 << size) - 1
        for _ in range(weight_draws):
            S = WeightedSet(random_weights(rng, size))
            urn = Urn(S)
            for level in range(size + 1):
                total = sum(urn.reach(x) for x in range(full + 1) if bin(x).count("1") == level)
                result.check(total == 1, f"level {level} of size {size} sums to {total}")
            for fam in oracles.all_ideals(size):
                if 0 not in fam or full in fam:
                    continue
                ideal = CoverIdeal(fam, "rows")
                result.check(leave_ideal_sum(S, ideal) == 1, f"leave-ideal sum != 1 for {sorted(fam)}")
                law = oracles.exit_set_distribution(S, fam)
                for i in range(size):
                    direct = exit_probability(S, ideal, i)
                    result.check(direct == exit_probability_recursive(S, ideal, i), f"exit recursion, ball {i}")
                    by_orders = sum((p for x, p in law.items() if x >> i & 1), Fraction(0))
                    result.check(direct == by_orders, f"exit probability vs draw orders, ball {i}")
    return result


def _files(sites) -> tuple[frozenset, frozenset]:
    return frozenset(r for r, _ in sites), frozenset(c for _, c in sites)


def nesting_suite(seed: int = 0, trials: int = 200, max_side: int = 5) -> SuiteResult:
    """Optimal assignments of consecutive sizes can be chosen nested."""
    rng = np.random.default_rng(seed)
    result = SuiteResult("nesting")
    for _ in range(trials):
        m, n = (int(x) for x in rng.integers(1, max_side + 1, 2))
        M = rng.random((m, n)).tolist()
        opt = {k: oracles.optimal_assignments(M, k, tol=0.0)[1] for k in range(1, min(m, n) + 1)}
        for k1 in opt:
            for k2 in opt:
                if k1 >= k2:
                    continue
                for mu in opt[k1]:
                    rows1, cols1 = _files(mu)
                    ok = any(rows1 <= _files(nu)[0] and cols1 <= _files(nu)[1] for nu in opt[k2])
                    result.check(ok, f"{m}x{n} k1={k1} k2={k2}: no nesting superset")
                for nu in opt[k2]:
                    rows2, cols2 = _files(nu)
                    ok = any(_files(mu)[0] <= rows2 and _files(mu)[1] <= cols2 for mu in opt[k1])
                    result.check(ok, f"{m}x{n} k1={k1} k2={k2}: no nesting subset")
    return result


def solver_suite(seed: int = 0, trials: int = 200, max_side: int = 6) -> SuiteResult:
    """Shortest paths, reduction and enumeration agree; reduction keeps the optimum optimal."""
    rng = np.random.default_rng(seed)
    result = SuiteResult("solver")
    for _ in range(trials):
        m, n = (int(x) for x in rng.integers(1, max_side + 1, 2))
        M = rng.random((m, n))
        for k in range(1, min(m, n) + 1):
            brute = brute_force_min(M, k)
            ssp = min_cost_assignment(M, k)
            red, trace = solve_by_reduction(M, k)
            result.check(abs(brute.cost - ssp.cost) <= 1e-9, f"ssp {ssp.cost} != brute {brute.cost}")
            result.check(abs(brute.cost - red) <= 1e-9, f"reduction {red} != brute {brute.cost}")
            for step in trace.steps:
                A = step.matrix
                result.check(bool((A >= 0).all()), "negative entry in reduction trace")
                best = brute_force_min(A, k).cost
                kept = sum(A[i, j] for i, j in brute.assignment)
                result.check(abs(kept - best) <= 1e-9, "optimal assignment lost by reduction")
    return result


def structure_suite(seed: int = 0, trials: int = 60) -> SuiteResult:
    """König, maximal covers, basis theorem, extension/contraction, column deletion."""
    rng = random.Random(seed)
    result = SuiteResult("structure")
    for _ in range(trials):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        Z = random_pattern(rng, m, n)
        covers = oracles.optimal_covers(Z, m, n)
        rk = rank(Z, m, n)
        result.check(rk == oracles.brute_rank(Z) == len(covers[0][0]) + len(covers[0][1]), "König")
        rmax, cmax = row_maximal_cover(Z, m, n), column_maximal_cover(Z, m, n)
        for cov in (rmax, cmax):
            result.check(cov.is_cover_of(Z) and cov.size == rk, "maximal cover not optimal")
        result.check(all(r <= rmax.rows for r, _ in covers), "row-maximal cover misses a row")
        result.check(all(c <= cmax.cols for _, c in covers), "column-maximal cover misses a column")

        for k in range(1, min(m, n) + 1):
            ideal = enumerate_row_ideal(Z, m, n, k).members
            rz = sum(1 << i for i in r_of(Z, m, n))
            for x in range(1 << m):
                result.check((x in ideal) == ((x | rz) in ideal), "extension lemma")
            for i in range(m):
                for j in range(n):
                    if (i, j) in Z or rank(Z | {(i, j)}, m, n) != rk + 1:
                        continue
                    bigger = enumerate_row_ideal(Z | {(i, j)}, m, n, k)
                    quotient = ideal_quotient(CoverIdeal(ideal, "rows"), i)
                    result.check(bigger.members == quotient.members, "contraction corollary")

        # basis theorem on integer matrices (exact ties)
        for k in range(max(rk, 1), min(m, n) + 1):
            M = [[0 if (i, j) in Z else rng.randint(1, 4) for j in range(n)] for i in range(m)]
            _, opts = oracles.optimal_assignments(M, k, tol=0.0)
            for rows, cols in covers:
                for mu in opts:
                    mr, mc = _files(mu)
                    result.check(rows <= mr and cols <= mc, "basis theorem: cover file misses an optimum")

    for _ in range(trials // 3):
        m, n = rng.randint(2, 4), rng.randint(2, 4)
        k = rng.randint(2, min(m, n))
        j0 = rng.randrange(n)
        Z = set(random_pattern(rng, m, n))
        Z |= {(i, j0) for i in rng.sample(range(m), k)}
        inst = Instance(WeightedSet(random_weights(rng, m)), WeightedSet(random_weights(rng, n)), ZeroPattern.of(Z), k)
        reduced = inst.without_column(j0, k - 1)
        result.check(
            expected_min_probabilistic(inst).value == expected_min_probabilistic(reduced).value,
            "column deletion identity",
        )
    return result


SUITE_FUNCS = {
    "equivalence": equivalence_suite,
    "urn": urn_suite,
    "nesting": nesting_suite,
    "solver": solver_suite,
    "structure": structure_suite,
}
