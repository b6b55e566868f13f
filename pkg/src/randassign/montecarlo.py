"""Monte Carlo checks of the exact formulas on sampled standard matrices.

Random streams: sample chunk ``c`` of a run seeded with ``seed`` draws from
``PCG64(SeedSequence(seed, spawn_key=(c,)))``. Chunks have a fixed size, so
a report depends only on ``(seed, n_samples)`` and not on the thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .cover_poset import CapExceeded, enumerate_row_ideal
from .formulas import expected_min_probabilistic
from .instance import Instance, Scalar, format_scalar
from .solver import MAX_ENUMERATED, _ssp, assignment_table, batch_min_cost, count_assignments
from .urn import exit_probability

CHUNK = 1 << 16


@dataclass(frozen=True)
class SampleReport:
    estimate: float
    stderr: float
    n_samples: int
    seed: int
    target: Scalar | None = None
    quantity: str = ""

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")

    @property
    def deviation(self) -> float | None:
        """Distance to the target in standard errors."""
        if self.target is None:
            return None
        diff = abs(self.estimate - float(self.target))
        if self.stderr == 0:
            return 0.0 if diff == 0 else math.inf
        return diff / self.stderr

    def agrees(self, n_se: float = 3.0) -> bool:
        return self.target is not None and self.deviation <= n_se

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "target": None if self.target is None else format_scalar(self.target),
            "target_float": None if self.target is None else float(self.target),
            "deviation_se": self.deviation,
        }


def stream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for task ``index`` of a run seeded with ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _rates(inst: Instance) -> np.ndarray:
    r = np.array([float(w) for w in inst.rows.weights])
    c = np.array([float(w) for w in inst.cols.weights])
    return np.outer(r, c)


def _zero_mask(inst: Instance) -> np.ndarray:
    mask = np.zeros((inst.m, inst.n), dtype=bool)
    for r, c in inst.zeros.sites:
        mask[r, c] = True
    return mask


def sample_matrices(inst: Instance, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` independent standard matrices, shape (size, m, n).

    Zero sites are exactly 0; entry (i, j) is otherwise ``-log(U) / rate``.
    """
    u = 1.0 - rng.random((size, inst.m, inst.n))  # in (0, 1]
    out = -np.log(u) / _rates(inst)
    out[:, _zero_mask(inst)] = 0.0
    return out


def sample_matrix(inst: Instance, rng: np.random.Generator) -> np.ndarray:
    return sample_matrices(inst, 1, rng)[0]


def _solve_batch(mats: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray | None]:
    """Minimum costs and, when enumerable, the chosen table rows."""
    N, m, n = mats.shape
    if count_assignments(m, n, k) <= MAX_ENUMERATED:
        return batch_min_cost(mats, k)
    costs = np.empty(N)
    for s in range(N):
        rm = _ssp(mats[s], k)
        costs[s] = math.fsum(mats[s, i, j] for i, j in enumerate(rm) if j >= 0)
    return costs, None


def _moments(x: np.ndarray) -> tuple[int, float, float]:
    mean = float(x.mean())
    return len(x), mean, float(((x - mean) ** 2).sum())


def _combine(parts: list[tuple[int, float, float]]) -> tuple[int, float, float]:
    """Pairwise merge of (count, mean, M2) in a fixed order."""
    n, mean, m2 = parts[0]
    for nb, mb, m2b in parts[1:]:
        tot = n + nb
        delta = mb - mean
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    return n, mean, m2


def _run(
    inst: Instance,
    n_samples: int,
    seed: int,
    statistic: Callable[[np.ndarray, np.ndarray | None, np.ndarray], np.ndarray],
    threads: int = 1,
) -> tuple[float, float]:
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    sizes = [CHUNK] * (n_samples // CHUNK)
    if n_samples % CHUNK:
        sizes.append(n_samples % CHUNK)

    def chunk(c: int):
        mats = sample_matrices(inst, sizes[c], stream(seed, c))
        costs, choice = _solve_batch(mats, inst.k)
        return _moments(statistic(costs, choice, mats))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(chunk, range(len(sizes))))
    else:
        parts = [chunk(c) for c in range(len(sizes))]
    n, mean, m2 = _combine(parts)
    return mean, math.sqrt(m2 / (n - 1) / n)


def _exact_or_none(fn):
    try:
        return fn()
    except CapExceeded:
        return None


def estimate_expected_min(inst: Instance, n_samples: int, seed: int, threads: int = 1) -> SampleReport:
    """Sample mean of the minimum k-assignment cost."""
    mean, se = _run(inst, n_samples, seed, lambda costs, choice, mats: costs, threads)
    target = _exact_or_none(lambda: expected_min_probabilistic(inst).value)
    return SampleReport(mean, se, n_samples, seed, target, "expected_min")


def _require_table(inst: Instance) -> np.ndarray:
    if count_assignments(inst.m, inst.n, inst.k) > MAX_ENUMERATED:
        raise ValueError("participation estimates need an enumerable assignment table")
    return assignment_table(inst.m, inst.n, inst.k)


def site_participation_target(inst: Instance, site: tuple[int, int]) -> Scalar:
    """Rate times the drop in expected cost when the site is set to zero."""
    i, j = site
    return inst.rate(i, j) * (
        expected_min_probabilistic(inst).value - expected_min_probabilistic(inst.with_zero(site)).value
    )


def estimate_site_participation(
    inst: Instance, site: tuple[int, int], n_samples: int, seed: int, threads: int = 1
) -> SampleReport:
    """Frequency with which ``site`` lies in the optimal k-assignment."""
    i, j = site
    if not (0 <= i < inst.m and 0 <= j < inst.n):
        raise ValueError(f"site {site} outside the matrix")
    if site in inst.zeros:
        raise ValueError(f"site {site} is a zero site")
    table = _require_table(inst)
    hit = np.any(table == i * inst.n + j, axis=1).astype(float)
    mean, se = _run(inst, n_samples, seed, lambda costs, choice, mats: hit[choice], threads)
    target = _exact_or_none(lambda: site_participation_target(inst, site))
    return SampleReport(mean, se, n_samples, seed, target, f"site_participation({i},{j})")


def row_participation_target(inst: Instance, i0: int) -> Scalar:
    """Probability that row ``i0`` is in the exit set of the row partial-cover ideal."""
    ideal = enumerate_row_ideal(inst.zeros.sites, inst.m, inst.n, inst.k)
    if not len(ideal):
        # a zero-cost k-assignment exists and avoids the zero-free row
        return Fraction(0) if inst.exact else 0.0
    return exit_probability(inst.rows, ideal, i0)


def estimate_row_participation(
    inst: Instance, i0: int, n_samples: int, seed: int, threads: int = 1
) -> SampleReport:
    """Frequency with which row ``i0`` meets the optimal k-assignment."""
    if not 0 <= i0 < inst.m:
        raise ValueError(f"row {i0} outside the matrix")
    if any(r == i0 for r, _ in inst.zeros.sites):
        raise ValueError(f"row {i0} has zero sites")
    table = _require_table(inst)
    hit = np.any(table // inst.n == i0, axis=1).astype(float)
    mean, se = _run(inst, n_samples, seed, lambda costs, choice, mats: hit[choice], threads)
    target = _exact_or_none(lambda: row_participation_target(inst, i0))
    return SampleReport(mean, se, n_samples, seed, target, f"row_participation({i0})")
