"""Expected minimum k-assignment cost: main evaluators and closed forms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .cover_poset import check_caps, enumerate_ideal, mobius_table
from .instance import Instance, InstanceError, Scalar
from .urn import Urn, expected_exit_time_2d

METHODS = ("probabilistic", "combinatorial", "bcr_closed", "cs_closed", "parisi")


@dataclass(frozen=True)
class ExpectedValue:
    value: Scalar
    method: str

    def __float__(self) -> float:
        return float(self.value)


def _zero(inst: Instance) -> Scalar:
    return Fraction(0) if inst.exact else 0.0


def expected_min_probabilistic(inst: Instance) -> ExpectedValue:
    """Expected exit time of the partial-cover ideal in the two-dimensional urn."""
    ideal = enumerate_ideal(inst)
    value = expected_exit_time_2d(inst, ideal) if len(ideal) else _zero(inst)
    return ExpectedValue(value + _zero(inst), "probabilistic")


def combinatorial_terms(inst: Instance) -> list[tuple[tuple[int, int], int, Scalar, Scalar]]:
    """Terms of the Möbius sum: ``((X, Y), -mu, w_R(not X), w_C(not Y))``."""
    ideal = enumerate_ideal(inst)
    mu = mobius_table(ideal, inst.m)
    ur, uc = Urn(inst.rows), Urn(inst.cols)
    return [
        ((p.rows, p.cols), -mu[p], ur.complement_weight(p.rows), uc.complement_weight(p.cols))
        for p in ideal
    ]


def expected_min_combinatorial(inst: Instance) -> ExpectedValue:
    """Möbius-weighted sum over the partial-cover poset."""
    total = _zero(inst)
    for _, coeff, wr, wc in combinatorial_terms(inst):
        total += coeff / (wr * wc)
    return ExpectedValue(total, "combinatorial")


def expected_min_bcr(inst: Instance) -> ExpectedValue:
    """Signed-binomial double sum over row and column sets, for zero-free instances."""
    if len(inst.zeros):
        raise InstanceError("zeros", "closed form applies only to instances without zeros")
    m, n, k = inst.m, inst.n, inst.k
    check_caps(m, n, k)
    ur, uc = Urn(inst.rows), Urn(inst.cols)
    total = _zero(inst)
    for a in range(min(k, m + 1)):
        for X in combinations(range(m), a):
            xm = sum(1 << i for i in X)
            wr = ur.complement_weight(xm)
            for b in range(min(k - a, n + 1)):
                s = a + b
                coeff = (-1) ** (k - 1 - s) * comb(m + n - 1 - s, k - 1 - s)
                for Y in combinations(range(n), b):
                    ym = sum(1 << j for j in Y)
                    total += coeff / (wr * uc.complement_weight(ym))
    return ExpectedValue(total, "bcr_closed")


def expected_min_cs(m: int, n: int, k: int) -> ExpectedValue:
    """Rate-one, zero-free closed form: sum of 1/((m-i)(n-j)) over i + j < k."""
    if not (m >= 1 and n >= 1 and 1 <= k <= min(m, n)):
        raise ValueError(f"need 1 <= k <= min(m, n), got m={m}, n={n}, k={k}")
    total = Fraction(0)
    for i in range(k):
        for j in range(k - i):
            total += Fraction(1, (m - i) * (n - j))
    return ExpectedValue(total, "cs_closed")


def parisi(n: int) -> ExpectedValue:
    """Exact partial sum of 1/i^2 for i = 1..n."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    # common denominator lcm(1..n)^2 keeps the sum to integer additions
    lcm = math.lcm(*range(1, n + 1))
    num = sum((lcm // i) ** 2 for i in range(1, n + 1))
    return ExpectedValue(Fraction(num, lcm * lcm), "parisi")


def zeta2_limit_area(resolution: int = 200) -> float:
    """Area under the limit curve exp(-x) + exp(-y) = 1 in the positive quadrant.

    With y = -log(1 - exp(-x)) and the change of variables
    x = -log(1 - exp(-s)) the area becomes the integral of s / (exp(s) - 1)
    over s > 0, which is smooth at 0 (limit 1) and decays like s exp(-s).
    That integral is truncated at s = 64 (tail below 1e-25) and evaluated by
    composite 10-point Gauss-Legendre on ``resolution`` equal panels.
    """
    if resolution < 1:
        raise ValueError("resolution must be positive")
    upper = 64.0
    nodes, weights = np.polynomial.legendre.leggauss(10)
    edges = np.linspace(0.0, upper, resolution + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    s = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    f = s / np.expm1(s)
    return float(math.fsum(w * f))


def expected_min(inst: Instance, method: str = "probabilistic") -> ExpectedValue:
    """Dispatch by method name: ``prob``, ``comb``, ``bcr`` or a full method tag."""
    method = {"prob": "probabilistic", "comb": "combinatorial", "bcr": "bcr_closed"}.get(method, method)
    if method == "probabilistic":
        return expected_min_probabilistic(inst)
    if method == "combinatorial":
        return expected_min_combinatorial(inst)
    if method == "bcr_closed":
        return expected_min_bcr(inst)
    raise ValueError(f"unknown method {method!r}")


def is_unit_zero_free(inst: Instance) -> bool:
    return not len(inst.zeros) and all(w == 1 for w in inst.rows.weights + inst.cols.weights)


__all__ = [
    "ExpectedValue",
    "combinatorial_terms",
    "expected_min",
    "expected_min_bcr",
    "expected_min_combinatorial",
    "expected_min_cs",
    "expected_min_probabilistic",
    "is_unit_zero_free",
    "parisi",
    "zeta2_limit_area",
]
