"""Predimension calculus: self-sufficiency, closures, dimension.

The predimension of a point set X inside a structure is |X| minus the number
of relation instances lying entirely inside X.  A set A is self-sufficient
when every strictly larger superset has strictly larger predimension; the
closure of X is the unique maximal superset minimizing predimension, and the
dimension of X is that minimum value.

Two independent closure routes are kept deliberately separate: an exhaustive
subset-table oracle (exponential, authoritative at small size) and a max-flow
reduction (polynomial, scales past the enumeration cap).  They are
cross-checked against each other and against the definition of closure as the
intersection of all self-sufficient supersets.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import kernels, mincut
from .budget import MAX_SUBSET_POINTS, BudgetExceeded, subset_points_cap
from .structures import Embedding, FinStruct, check_points, find_embeddings


def _mask_of(xs: Iterable[int]) -> int:
    m = 0
    for p in xs:
        m |= 1 << p
    return m


def _points_of(mask: int) -> frozenset[int]:
    points = set()
    p = 0
    while mask:
        if mask & 1:
            points.add(p)
        mask >>= 1
        p += 1
    return frozenset(points)


def delta(s: FinStruct, xs: Iterable[int] | None = None) -> int:
    """Predimension of xs (default: all points).  Never clamped at zero."""
    if xs is None:
        return s.size - s.total_tuples
    xs = check_points(s, xs)
    mask = _mask_of(xs)
    inside = sum(1 for m in s.tuple_masks if m & ~mask == 0)
    return len(xs) - inside


class SubsetTables:
    """Exhaustive per-subset tables for one structure, bitmask indexed."""

    def __init__(self, s: FinStruct):
        if s.size > MAX_SUBSET_POINTS:
            raise BudgetExceeded(
                f"{s.size} points exceed the {MAX_SUBSET_POINTS}-point table ceiling"
            )
        self.struct = s
        self.n = s.size
        self.delta = kernels.delta_table(s.size, s.tuple_masks)
        self.sizes = kernels.size_table(s.size)
        self._smin = None
        self._per_size = None

    @property
    def smin(self) -> np.ndarray:
        if self._smin is None:
            self._smin = kernels.superset_min_table(self.delta, self.n)
        return self._smin

    def delta_of(self, mask: int) -> int:
        return int(self.delta[mask])

    def min_over_supersets(self, mask: int) -> int:
        return int(self.smin[mask])

    def per_size_minima(self) -> list[int]:
        if self._per_size is None:
            self._per_size = kernels.min_delta_per_size(self.delta, self.sizes, self.n)
        return self._per_size

    def is_self_sufficient(self, mask: int) -> bool:
        d = self.delta_of(mask)
        smin = self.smin
        for p in range(self.n):
            bit = 1 << p
            if not mask & bit and smin[mask | bit] <= d:
                return False
        return True

    def maximal_minimizer(self, seed_mask: int) -> int:
        """Union of every superset of the seed attaining the minimum.

        Minimizers are closed under union (predimension is submodular), so
        point p lies in the maximal one exactly when forcing p in leaves the
        minimum unchanged.
        """
        smin = self.smin
        best = smin[seed_mask]
        out = seed_mask
        for p in range(self.n):
            bit = 1 << p
            if not seed_mask & bit and smin[seed_mask | bit] == best:
                out |= bit
        return out

    def self_sufficient_vector(self) -> np.ndarray:
        """Boolean table of self-sufficiency over all masks (small n only)."""
        if self.n > 20:
            raise BudgetExceeded("self-sufficiency vector capped at 20 points")
        masks = np.arange(1 << self.n, dtype=np.int64)
        ok = np.ones(1 << self.n, dtype=bool)
        for p in range(self.n):
            bit = 1 << p
            has = (masks & bit) != 0
            ok &= has | (self.smin[masks | bit] > self.delta)
        return ok


@lru_cache(maxsize=32)
def tables_for(s: FinStruct) -> SubsetTables:
    return SubsetTables(s)


@dataclass(frozen=True)
class ClosureResult:
    points: frozenset[int]
    dimension: int


def is_self_sufficient(s: FinStruct, xs: Iterable[int], max_points: int | None = None) -> bool:
    """True when every strict superset of xs has strictly larger predimension.

    Table route below the enumeration cap, per-point max-flow above it; both
    decide min-over-strict-supersets > predimension(xs).
    """
    xs = check_points(s, xs)
    cap = subset_points_cap(max_points)
    if s.size <= cap:
        return tables_for(s).is_self_sufficient(_mask_of(xs))
    base = delta(s, xs)
    instances = [tup for _, tup in s.iter_tuples()]
    for p in s.points():
        if p in xs:
            continue
        minimum, _ = mincut.min_superset_delta(s.size, instances, xs | {p})
        if minimum <= base:
            return False
    return True


def closure(
    s: FinStruct,
    xs: Iterable[int],
    method: str = "auto",
    max_points: int | None = None,
) -> ClosureResult:
    """Smallest self-sufficient superset of xs, with its dimension.

    Computed as the maximal predimension minimizer over supersets; `method`
    picks the oracle tables ("oracle"), the max-flow reduction ("mincut"),
    the literal intersection of self-sufficient supersets ("definition"),
    or size-based dispatch ("auto").
    """
    xs = check_points(s, xs)
    cap = subset_points_cap(max_points)
    if method == "auto":
        method = "oracle" if s.size <= cap else "mincut"
    if method == "oracle":
        if s.size > cap:
            raise BudgetExceeded(f"oracle closure needs <= {cap} points, got {s.size}")
        tables = tables_for(s)
        best = tables.maximal_minimizer(_mask_of(xs))
        return ClosureResult(_points_of(best), tables.min_over_supersets(_mask_of(xs)))
    if method == "mincut":
        instances = [tup for _, tup in s.iter_tuples()]
        minimum, chosen = mincut.min_superset_delta(s.size, instances, xs)
        return ClosureResult(chosen, minimum)
    if method == "definition":
        tables = tables_for(s)
        ss = tables.self_sufficient_vector()
        masks = np.arange(1 << s.size, dtype=np.int64)
        seed = _mask_of(xs)
        candidates = masks[ss & ((masks & seed) == seed)]
        meet = int(np.bitwise_and.reduce(candidates)) if len(candidates) else seed
        return ClosureResult(_points_of(meet), delta(s, _points_of(meet)))
    raise ValueError(f"unknown closure method {method!r}")


def dim(s: FinStruct, xs: Iterable[int], method: str = "auto") -> int:
    """Dimension: predimension of the closure.  Negative values (possible
    only outside the positive-predimension class) are reported, with a
    warning, not clamped."""
    value = closure(s, xs, method=method).dimension
    if value < 0:
        warnings.warn(
            "negative dimension: structure lies outside the positive-predimension class",
            RuntimeWarning,
            stacklevel=2,
        )
    return value


def dim_rel(s: FinStruct, xs: Iterable[int], ys: Iterable[int], method: str = "auto") -> int:
    """Relative dimension dim(X over Y) = dim(X union Y) - dim(Y)."""
    xs = check_points(s, xs)
    ys = check_points(s, ys)
    return dim(s, xs | ys, method=method) - dim(s, ys, method=method)


def is_d_independent(
    s: FinStruct,
    parts: Sequence[Iterable[int]],
    over: Iterable[int] = (),
    method: str = "auto",
) -> bool:
    """Each part has the same relative dimension over the base whether or not
    the union of the other parts is adjoined to the base."""
    over = check_points(s, over)
    sets = [check_points(s, part) for part in parts]
    for i, xs in enumerate(sets):
        rest: frozenset[int] = frozenset().union(*(sets[:i] + sets[i + 1 :])) if len(sets) > 1 else frozenset()
        if dim_rel(s, xs, over | rest, method=method) != dim_rel(s, xs, over, method=method):
            return False
    return True


def in_k0(s: FinStruct, max_points: int | None = None) -> bool:
    """Every nonempty subset has strictly positive predimension."""
    cap = subset_points_cap(max_points)
    if s.size <= cap:
        minima = tables_for(s).per_size_minima()
        return all(m >= 1 for m in minima[1:])
    instances = [tup for _, tup in s.iter_tuples()]
    for p in s.points():
        minimum, _ = mincut.min_superset_delta(s.size, instances, {p})
        if minimum < 1:
            return False
    return True


def find_leq_embeddings(a: FinStruct, m: FinStruct) -> list[Embedding]:
    """Induced embeddings of a into m whose image is self-sufficient in m,
    in lexicographic mapping order, deduplicated exactly."""
    out = []
    seen = set()
    for mapping in find_embeddings(a, m):
        if mapping in seen:
            continue
        seen.add(mapping)
        if is_self_sufficient(m, mapping):
            out.append(Embedding(a, m, mapping))
    return out
