"""Cyclic-group harness: progressions as an amalgamation pattern.

Tuples over Z_N are encoded as big-endian base-N integers, so numeric order
on codes equals lexicographic order on tuples.  The canonical set E pairs the
first n-1 coordinates with their sum, filtered by a weighted-sum condition on
a chosen subset of Z_N; a tuple whose every drop-one projection lands in the
corresponding projection of E encodes an n-term arithmetic progression inside
that subset.  All measures are exact rationals: cardinality over a power of N.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .budget import BudgetExceeded, enumeration_budget


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


@dataclass(frozen=True)
class CyclicInstance:
    """Ambient modulus, tuple length, and the distinguished subset of Z_N."""

    modulus: int
    length: int
    members: frozenset[int]

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        if self.length < 3:
            raise ValueError("tuple length must be at least 3")
        if not all(0 <= a < self.modulus for a in self.members):
            raise ValueError("set members must lie in 0..modulus-1")

    @classmethod
    def of(cls, modulus: int, length: int, members: Iterable[int]) -> "CyclicInstance":
        return cls(modulus, length, frozenset(members))

    @property
    def is_prime(self) -> bool:
        return _is_prime(self.modulus)

    def member_table(self) -> np.ndarray:
        table = np.zeros(self.modulus, dtype=bool)
        if self.members:
            table[sorted(self.members)] = True
        return table


# ---------------------------------------------------------------------------
# code arithmetic


def _digit(codes: np.ndarray, modulus: int, arity: int, j: int) -> np.ndarray:
    """Digit j (0-based, big-endian) of each code."""
    return (codes // modulus ** (arity - 1 - j)) % modulus


def _drop(codes: np.ndarray, modulus: int, arity: int, j: int) -> np.ndarray:
    """Codes with digit j removed (result has arity-1 digits)."""
    pw = modulus ** (arity - 1 - j)
    return (codes // (pw * modulus)) * pw + codes % pw


class CubeSet:
    """A subset of Z_N^arity stored as sorted unique int64 codes."""

    __slots__ = ("modulus", "arity", "codes")

    def __init__(self, modulus: int, arity: int, codes):
        self.modulus = int(modulus)
        self.arity = int(arity)
        arr = np.asarray(codes, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= modulus**arity):
            raise ValueError("code out of range for the cube")
        self.codes = np.unique(arr)

    @classmethod
    def from_tuples(
        cls, modulus: int, arity: int, tuples: Iterable[Sequence[int]]
    ) -> "CubeSet":
        codes = [cls._encode(modulus, arity, tup) for tup in tuples]
        return cls(modulus, arity, np.asarray(codes, dtype=np.int64))

    @classmethod
    def full(cls, modulus: int, arity: int, budget: int | None = None) -> "CubeSet":
        space = modulus**arity
        limit = enumeration_budget(budget)
        if space > limit:
            raise BudgetExceeded(f"full cube has {space} tuples, budget is {limit}")
        return cls(modulus, arity, np.arange(space, dtype=np.int64))

    @staticmethod
    def _encode(modulus: int, arity: int, tup: Sequence[int]) -> int:
        if len(tup) != arity:
            raise ValueError(f"tuple length {len(tup)}, expected {arity}")
        code = 0
        for b in tup:
            if not 0 <= b < modulus:
                raise ValueError(f"entry {b} outside 0..{modulus - 1}")
            code = code * modulus + int(b)
        return code

    def encode(self, tup: Sequence[int]) -> int:
        return self._encode(self.modulus, self.arity, tup)

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.arity):
            out.append(int(code % self.modulus))
            code //= self.modulus
        return tuple(reversed(out))

    def __len__(self) -> int:
        return int(self.codes.size)

    def __contains__(self, tup) -> bool:
        code = self.encode(tup)
        idx = int(np.searchsorted(self.codes, code))
        return idx < len(self.codes) and int(self.codes[idx]) == code

    def contains_codes(self, codes: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.codes, codes)
        idx = np.minimum(idx, max(len(self.codes) - 1, 0))
        if not len(self.codes):
            return np.zeros(len(codes), dtype=bool)
        return self.codes[idx] == codes

    def drop(self, j: int) -> np.ndarray:
        """Projection codes (with repeats) after removing coordinate j."""
        return _drop(self.codes, self.modulus, self.arity, j)

    def project(self, j: int) -> "CubeSet":
        """The set of drop-one projections, as a CubeSet of smaller arity."""
        return CubeSet(self.modulus, self.arity - 1, np.unique(self.drop(j)))

    def measure(self) -> Fraction:
        return Fraction(len(self), self.modulus**self.arity)

    def digits(self) -> np.ndarray:
        """len x arity matrix of digits."""
        return np.stack(
            [_digit(self.codes, self.modulus, self.arity, j) for j in range(self.arity)],
            axis=1,
        )

    def translate(self, shifts: Sequence[int]) -> "CubeSet":
        if len(shifts) != self.arity:
            raise ValueError("need one shift per coordinate")
        digits = self.digits()
        shifted = (digits + np.asarray(shifts, dtype=np.int64)) % self.modulus
        weights = self.modulus ** np.arange(self.arity - 1, -1, -1, dtype=np.int64)
        return CubeSet(self.modulus, self.arity, shifted @ weights)

    def iter_tuples(self) -> Iterator[tuple[int, ...]]:
        for code in self.codes:
            yield self.decode(int(code))

    def to_list(self) -> list[tuple[int, ...]]:
        return list(self.iter_tuples())


# ---------------------------------------------------------------------------
# the canonical set and its hypotheses


def build_E(inst: CyclicInstance, budget: int | None = None) -> CubeSet:
    """The canonical pattern set: prefixes paired with their coordinate sum,
    filtered by the weighted-sum membership condition."""
    N, n = inst.modulus, inst.length
    space = N ** (n - 1)
    limit = enumeration_budget(budget)
    if space > limit:
        raise BudgetExceeded(f"prefix space {space} exceeds budget {limit}")
    prefixes = np.arange(space, dtype=np.int64)
    total = np.zeros(space, dtype=np.int64)
    weighted = np.zeros(space, dtype=np.int64)
    for k in range(n - 1):
        digit = _digit(prefixes, N, n - 1, k)
        total += digit
        weighted += (k + 1) * digit
    mask = inst.member_table()[weighted % N]
    codes = prefixes[mask] * N + (total[mask] % N)
    return CubeSet(N, n, codes)


@dataclass(frozen=True)
class MainHypothesesReport:
    projection_measure: Fraction  # measure of the drop-last projection
    positive: bool  # the measure is positive
    fibre_bound: int  # max drop-one fibre size over the set
    injective: bool  # every drop-one projection is injective
    c_constant: int  # projection-comparison constant (max(fibre_bound, 1))
    max_ratio: Fraction  # largest sampled projection-size ratio
    samples: int
    seed: int
    prime_modulus: bool

    @property
    def all_hold(self) -> bool:
        return self.positive and self.max_ratio <= self.c_constant


def verify_main_hypotheses(
    inst: CyclicInstance, e_set: CubeSet, samples: int = 20, seed: int = 0
) -> MainHypothesesReport:
    """Exact projection measure, exhaustive fibre bound, and a seeded sample
    of the projection-comparison inequality."""
    N, n = inst.modulus, inst.length
    last = n - 1
    proj_measure = Fraction(len(e_set.project(last)), N ** (n - 1))
    fibre = 0
    for j in range(n):
        dropped = e_set.drop(j)
        if dropped.size:
            _, counts = np.unique(dropped, return_counts=True)
            fibre = max(fibre, int(counts.max()))
    k = max(fibre, 1)
    rng = np.random.default_rng(seed)
    max_ratio = Fraction(0)
    for _ in range(samples):
        if not len(e_set):
            break
        f_codes = e_set.codes[rng.random(len(e_set)) < 0.5]
        if not f_codes.size:
            continue
        sizes = [
            np.unique(_drop(f_codes, N, n, j)).size for j in range(n)
        ]
        for size in sizes:
            ratio = Fraction(sizes[last], size)
            if ratio > max_ratio:
                max_ratio = ratio
    return MainHypothesesReport(
        projection_measure=proj_measure,
        positive=proj_measure > 0,
        fibre_bound=fibre,
        injective=fibre <= 1,
        c_constant=k,
        max_ratio=max_ratio,
        samples=samples,
        seed=seed,
        prime_modulus=inst.is_prime,
    )


# ---------------------------------------------------------------------------
# solutions and progressions


def solve_amalgamation(
    inst: CyclicInstance, e_set: CubeSet, budget: int | None = None
) -> CubeSet:
    """Every tuple whose drop-one projections all land in the corresponding
    projections of the given set, in lexicographic order."""
    N, n = inst.modulus, inst.length
    space = N**n
    limit = enumeration_budget(budget)
    if space > limit:
        raise BudgetExceeded(f"solution space {space} exceeds budget {limit}")
    if not len(e_set):
        return CubeSet(N, n, np.empty(0, dtype=np.int64))
    return CubeSet(N, n, kernels.cyclic_solutions(N, n, e_set.codes))


def is_solution(inst: CyclicInstance, e_set: CubeSet, tup: Sequence[int]) -> bool:
    """Direct projection-by-projection check, independent of the solver."""
    code = np.asarray([e_set.encode(tup)], dtype=np.int64)
    for j in range(inst.length):
        dropped = _drop(code, inst.modulus, inst.length, j)
        if not bool(e_set.project(j).contains_codes(dropped)[0]):
            return False
    return True


@dataclass(frozen=True)
class Progression:
    start: int
    step: int
    terms: tuple[int, ...]
    nondegenerate: bool  # step is nonzero
    valid: bool  # every term belongs to the instance's set


def extract_progression(inst: CyclicInstance, tup: Sequence[int]) -> Progression:
    """Recover the progression encoded by a tuple: start from the weighted
    prefix sum, step from the last coordinate minus the plain prefix sum."""
    N, n = inst.modulus, inst.length
    if len(tup) != n:
        raise ValueError(f"tuple length {len(tup)}, expected {n}")
    start = sum((k + 1) * tup[k] for k in range(n - 1)) % N
    step = (tup[n - 1] - sum(tup[: n - 1])) % N
    terms = tuple((start + j * step) % N for j in range(n))
    return Progression(
        start=start,
        step=step,
        terms=terms,
        nondegenerate=step != 0,
        valid=all(t in inst.members for t in terms),
    )


def survey_solutions(
    inst: CyclicInstance, solutions: CubeSet
) -> tuple[int, int, int]:
    """(total, valid, nondegenerate) over a solution set, vectorized."""
    N, n = inst.modulus, inst.length
    if not len(solutions):
        return 0, 0, 0
    digits = solutions.digits()
    weights = np.arange(1, n, dtype=np.int64)
    start = (digits[:, : n - 1] @ weights) % N
    step = (digits[:, n - 1] - digits[:, : n - 1].sum(axis=1)) % N
    table = inst.member_table()
    valid = np.ones(len(solutions), dtype=bool)
    for j in range(n):
        valid &= table[(start + j * step) % N]
    nondeg = step != 0
    return len(solutions), int(valid.sum()), int(nondeg.sum())


# ---------------------------------------------------------------------------
# exact-measure lemmas


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs


def projection_inequalities(
    inst: CyclicInstance,
    f_codes: np.ndarray,
    drop_index: int,
    k: int,
    c_codes: np.ndarray,
    b_codes: np.ndarray,
) -> list[InequalityCheck]:
    """The three exact projection-measure inequalities for a subset F of the
    pattern set, a comparison projection (drop_index), and prescribed subsets
    C and B of the projection space.  Each returned check must hold; a
    violation is an implementation bug."""
    N, n = inst.modulus, inst.length
    last = n - 1
    denom = N ** (n - 1)
    f_codes = np.asarray(f_codes, dtype=np.int64)
    c_codes = np.unique(np.asarray(c_codes, dtype=np.int64))
    b_codes = np.unique(np.asarray(b_codes, dtype=np.int64))
    pj = np.unique(_drop(f_codes, N, n, last))
    pi = np.unique(_drop(f_codes, N, n, drop_index))

    def measure(count) -> Fraction:
        return Fraction(int(count), denom)

    checks = [
        InequalityCheck("projection_comparison", k * measure(pi.size), measure(pj.size))
    ]
    drop_i = _drop(f_codes, N, n, drop_index)
    outside_c = f_codes[~np.isin(drop_i, c_codes)]
    pj_outside = np.unique(_drop(outside_c, N, n, last))
    c_hit = np.intersect1d(c_codes, pi).size
    checks.append(
        InequalityCheck(
            "removal_lower_bound",
            measure(pj_outside.size),
            measure(pj.size) - k * measure(c_hit),
        )
    )
    inside_b = f_codes[np.isin(drop_i, b_codes)]
    pj_inside = np.unique(_drop(inside_b, N, n, last))
    b_miss = np.setdiff1d(pi, b_codes).size
    checks.append(
        InequalityCheck(
            "restriction_lower_bound",
            measure(pj_inside.size),
            measure(pj.size) - k * measure(b_miss),
        )
    )
    return checks


@dataclass(frozen=True)
class Lemma26Report:
    samples: int
    seed: int
    k: int
    checks_run: int
    violations: tuple[str, ...]

    @property
    def all_hold(self) -> bool:
        return not self.violations


def lemma26_checks(
    inst: CyclicInstance,
    e_set: CubeSet,
    samples: int = 100,
    seed: int = 0,
) -> Lemma26Report:
    """Seeded sampling of the projection-measure inequalities over random
    subsets F of the pattern set and random C, B in the projection space."""
    N, n = inst.modulus, inst.length
    space = N ** (n - 1)
    report = verify_main_hypotheses(inst, e_set, samples=0, seed=seed)
    k = report.c_constant
    rng = np.random.default_rng(seed)
    space_codes = np.arange(space, dtype=np.int64)
    checks_run = 0
    violations: list[str] = []
    for sample in range(samples):
        f_codes = e_set.codes[rng.random(len(e_set)) < 0.5]
        drop_index = int(rng.integers(0, n - 1))  # any projection except drop-last
        c_codes = space_codes[rng.random(space) < 0.3]
        b_codes = space_codes[rng.random(space) < 0.7]
        for check in projection_inequalities(inst, f_codes, drop_index, k, c_codes, b_codes):
            checks_run += 1
            if not check.holds:
                violations.append(
                    f"sample {sample}: {check.name} {check.lhs} < {check.rhs}"
                )
    return Lemma26Report(
        samples=samples,
        seed=seed,
        k=k,
        checks_run=checks_run,
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class FubiniCheck:
    direct: Fraction
    iterated: Fraction

    @property
    def holds(self) -> bool:
        return self.direct == self.iterated


def fubini_counting_check(
    modulus: int, arity: int, codes: np.ndarray, keep: Sequence[int]
) -> FubiniCheck:
    """Counting-measure consistency: the measure of a set equals the iterated
    slice-by-slice integral over any coordinate split, in exact rationals."""
    codes = np.unique(np.asarray(codes, dtype=np.int64))
    keep = tuple(keep)
    if len(set(keep)) != len(keep) or not all(0 <= j < arity for j in keep):
        raise ValueError("keep must be distinct coordinate indices")
    direct = Fraction(int(codes.size), modulus**arity)
    if not keep:
        inner = Fraction(int(codes.size), modulus**arity)
        return FubiniCheck(direct, inner)
    weights = {j: modulus**r for r, j in enumerate(reversed(keep))}
    proj = np.zeros(len(codes), dtype=np.int64)
    for j in keep:
        proj += _digit(codes, modulus, arity, j) * weights[j]
    _, counts = (
        np.unique(proj, return_counts=True) if codes.size else (None, np.empty(0, int))
    )
    rest = arity - len(keep)
    inner_sum = sum(
        (Fraction(int(c), modulus**rest) for c in counts), start=Fraction(0)
    )
    iterated = inner_sum * Fraction(1, modulus ** len(keep))
    return FubiniCheck(direct, iterated)
