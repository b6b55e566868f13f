"""Problem instances: weighted row/column sets, zero patterns and k.

Weights written as integers or ``"p/q"`` strings are held as exact
:class:`~fractions.Fraction` values. A single float literal anywhere in the
weights switches the whole instance to float mode.

Subsets of a weighted set are passed around as bitmasks (bit ``i`` stands
for the element at position ``i``). Functions that accept a subset also take
any iterable of labels.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, NamedTuple, Union

Scalar = Union[Fraction, float]

# subset bitmasks are capped at one machine word
MAX_FILES = 64

DEFAULT_ATOL = 1e-12

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$")


class InstanceError(ValueError):
    """Invalid instance data. ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def parse_scalar(value: Any, path: str = "value") -> Scalar:
    """Parse an int, ``"p/q"`` string or float into a scalar."""
    if isinstance(value, bool):
        raise InstanceError(path, f"expected a number, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InstanceError(path, f"non-finite value {value!r}")
        return value
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise InstanceError(path, f"expected an integer or 'p/q' string, got {value!r}")
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError:
            raise InstanceError(path, f"zero denominator in {value!r}") from None
    raise InstanceError(path, f"expected a number, got {type(value).__name__}")


def format_scalar(value: Scalar) -> int | str | float:
    """JSON-ready form of a scalar: int, ``"p/q"`` string, or float."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return value.numerator
        return f"{value.numerator}/{value.denominator}"
    return float(value)


def scalars_close(a: Scalar, b: Scalar, atol: float = DEFAULT_ATOL) -> bool:
    """Exact equality for two fractions, absolute tolerance otherwise."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= atol


def to_mask(subset: int | Iterable[int], size: int) -> int:
    """Convert a subset (bitmask or iterable of positions) to a bitmask."""
    if isinstance(subset, int) and not isinstance(subset, bool):
        if subset < 0 or subset >> size:
            raise ValueError(f"bitmask {subset:#x} has bits outside {size} elements")
        return subset
    mask = 0
    for i in subset:
        if not 0 <= i < size:
            raise ValueError(f"element {i} not in set of size {size}")
        mask |= 1 << i
    return mask


def members(mask: int) -> list[int]:
    """Positions of the set bits of ``mask``, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class WeightedSet:
    """An ordered set of elements with strictly positive weights."""

    weights: tuple[Scalar, ...]
    labels: tuple[int, ...] = ()

    def __post_init__(self):
        weights = tuple(self.weights)
        if any(isinstance(w, float) for w in weights):
            weights = tuple(float(w) for w in weights)
        object.__setattr__(self, "weights", weights)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(len(weights))))
        if len(self.labels) != len(weights):
            raise InstanceError("labels", "one label per weight required")
        if len(set(self.labels)) != len(self.labels):
            raise InstanceError("labels", "labels must be distinct")
        if len(weights) > MAX_FILES:
            raise InstanceError("weights", f"at most {MAX_FILES} elements supported")
        for i, w in enumerate(weights):
            if not w > 0:
                raise InstanceError(f"weights[{i}]", f"weight must be positive, got {w}")

    @classmethod
    def uniform(cls, size: int) -> WeightedSet:
        return cls(tuple(Fraction(1) for _ in range(size)))

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def exact(self) -> bool:
        return all(isinstance(w, Fraction) for w in self.weights)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.weights)) - 1

    @property
    def total(self) -> Scalar:
        return sum(self.weights, Fraction(0) if self.exact else 0.0)

    def index(self, label: int) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"element {label!r} not in weighted set") from None


def subset_weight(S: WeightedSet, X: int | Iterable[int]) -> Scalar:
    """Sum of the weights of the elements of ``X``."""
    mask = to_mask(X, len(S))
    total = Fraction(0) if S.exact else 0.0
    for i in members(mask):
        total += S.weights[i]
    return total


def complement_weight(S: WeightedSet, X: int | Iterable[int]) -> Scalar:
    """Weight of the elements of ``S`` outside ``X``."""
    mask = to_mask(X, len(S))
    return subset_weight(S, S.full_mask & ~mask)


class Site(NamedTuple):
    row: int
    col: int


@dataclass(frozen=True)
class ZeroPattern:
    sites: frozenset[Site] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "sites", frozenset(Site(int(r), int(c)) for r, c in self.sites))

    @classmethod
    def of(cls, sites: Iterable[tuple[int, int]]) -> ZeroPattern:
        return cls(frozenset(Site(r, c) for r, c in sites))

    def __iter__(self):
        return iter(sorted(self.sites))

    def __len__(self) -> int:
        return len(self.sites)

    def __contains__(self, site) -> bool:
        return Site(*site) in self.sites

    def row_masks(self, m: int) -> list[int]:
        """Per-row bitmask of the columns holding a zero."""
        masks = [0] * m
        for r, c in self.sites:
            masks[r] |= 1 << c
        return masks


@dataclass(frozen=True)
class Instance:
    """Distribution description of a standard matrix plus the target size k.

    Entry ``(i, j)`` is zero when the site is in ``zeros`` and otherwise
    exponential with rate ``rows.weights[i] * cols.weights[j]``.
    """

    rows: WeightedSet
    cols: WeightedSet
    zeros: ZeroPattern = field(default_factory=ZeroPattern)
    k: int = 1

    def __post_init__(self):
        if self.rows.exact != self.cols.exact:
            # one float weight puts the whole instance in float mode
            object.__setattr__(self, "rows", WeightedSet(tuple(float(w) for w in self.rows.weights)))
            object.__setattr__(self, "cols", WeightedSet(tuple(float(w) for w in self.cols.weights)))
        m, n = self.m, self.n
        if m < 1 or n < 1:
            raise InstanceError("rows" if m < 1 else "cols", "at least one element required")
        if m + n > MAX_FILES:
            raise InstanceError("rows", f"m + n must not exceed {MAX_FILES}")
        for r, c in self.zeros.sites:
            if not (0 <= r < m and 0 <= c < n):
                raise InstanceError("zeros", f"site ({r}, {c}) outside a {m}x{n} matrix")
        if isinstance(self.k, bool) or not isinstance(self.k, int):
            raise InstanceError("k", f"expected an integer, got {self.k!r}")
        if not 1 <= self.k <= min(m, n):
            raise InstanceError("k", f"k={self.k} out of range 1..{min(m, n)}")

    @classmethod
    def build(
        cls,
        rows: Iterable[Any],
        cols: Iterable[Any],
        zeros: Iterable[tuple[int, int]] = (),
        k: int = 1,
    ) -> Instance:
        """Convenience constructor from raw weights (ints, strings, floats)."""
        rw = tuple(parse_scalar(w, f"rows[{i}]") for i, w in enumerate(rows))
        cw = tuple(parse_scalar(w, f"cols[{i}]") for i, w in enumerate(cols))
        if any(isinstance(w, float) for w in rw + cw):
            rw = tuple(float(w) for w in rw)
            cw = tuple(float(w) for w in cw)
        return cls(WeightedSet(rw), WeightedSet(cw), ZeroPattern.of(zeros), k)

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.cols)

    @property
    def exact(self) -> bool:
        return self.rows.exact and self.cols.exact

    def rate(self, i: int, j: int) -> Scalar:
        return self.rows.weights[i] * self.cols.weights[j]

    def with_zero(self, site: tuple[int, int]) -> Instance:
        return Instance(self.rows, self.cols, ZeroPattern(self.zeros.sites | {Site(*site)}), self.k)

    def with_k(self, k: int) -> Instance:
        return Instance(self.rows, self.cols, self.zeros, k)

    def without_column(self, j: int, k: int | None = None) -> Instance:
        """Delete column ``j``; later columns shift down by one."""
        cols = WeightedSet(self.cols.weights[:j] + self.cols.weights[j + 1 :])
        zeros = ZeroPattern.of((r, c if c < j else c - 1) for r, c in self.zeros.sites if c != j)
        return Instance(self.rows, cols, zeros, self.k if k is None else k)


def instance_from_dict(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise InstanceError("$", "instance must be a JSON object")
    for key in ("rows", "cols", "k"):
        if key not in doc:
            raise InstanceError(key, "missing field")
    unknown = set(doc) - {"rows", "cols", "zeros", "k"}
    if unknown:
        raise InstanceError(sorted(unknown)[0], "unknown field")
    weights = {}
    for key in ("rows", "cols"):
        raw = doc[key]
        if not isinstance(raw, list) or not raw:
            raise InstanceError(key, "expected a nonempty list of weights")
        weights[key] = [parse_scalar(w, f"{key}[{i}]") for i, w in enumerate(raw)]
        for i, w in enumerate(weights[key]):
            if not w > 0:
                raise InstanceError(f"{key}[{i}]", f"weight must be positive, got {format_scalar(w)}")
    m, n = len(weights["rows"]), len(weights["cols"])

    raw_zeros = doc.get("zeros", [])
    if not isinstance(raw_zeros, list):
        raise InstanceError("zeros", "expected a list of [row, col] pairs")
    seen = set()
    for idx, site in enumerate(raw_zeros):
        path = f"zeros[{idx}]"
        if (
            not isinstance(site, list)
            or len(site) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in site)
        ):
            raise InstanceError(path, "expected [row, col] integer pair")
        r, c = site
        if not (0 <= r < m and 0 <= c < n):
            raise InstanceError(path, f"site ({r}, {c}) outside a {m}x{n} matrix")
        if (r, c) in seen:
            raise InstanceError(path, f"duplicate zero site ({r}, {c})")
        seen.add((r, c))

    k = doc["k"]
    if isinstance(k, bool) or not isinstance(k, int):
        raise InstanceError("k", f"expected an integer, got {k!r}")
    if not 1 <= k <= min(m, n):
        raise InstanceError("k", f"k={k} out of range 1..{min(m, n)}")

    rw, cw = weights["rows"], weights["cols"]
    if any(isinstance(w, float) for w in rw + cw):
        rw = [float(w) for w in rw]
        cw = [float(w) for w in cw]
    return Instance(WeightedSet(tuple(rw)), WeightedSet(tuple(cw)), ZeroPattern.of(seen), k)


def parse_instance(text: str) -> Instance:
    """Parse and validate a JSON instance document.

    >>> parse_instance('{"rows":[1,1],"cols":[1,1],"zeros":[],"k":2}').k
    2
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError("$", f"malformed JSON: {exc.msg}") from None
    return instance_from_dict(doc)


def instance_to_dict(inst: Instance) -> dict:
    return {
        "rows": [format_scalar(w) for w in inst.rows.weights],
        "cols": [format_scalar(w) for w in inst.cols.weights],
        "zeros": [[r, c] for r, c in inst.zeros],
        "k": inst.k,
    }


def serialize_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst))
