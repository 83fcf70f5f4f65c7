"""Control functions and the growth classes they carve out.

A control function assigns each size a lower bound that the predimension of
every subset of a member structure must meet.  Two shapes are supported: a
logarithm log_base(x + 1) with integer base >= 2, compared exactly through
integer powers (never through floats), and a step function given by a finite
rational table, compared exactly through Fraction arithmetic.

Membership in the growth class additionally requires strictly positive
predimension on nonempty subsets, which for the logarithm shape is already
implied by its bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .budget import BudgetExceeded
from .structures import FinStruct, PreconditionError, free_amalgam
from .predimension import is_self_sufficient, tables_for

# Integer facts used instead of runtime transcendentals: 2 < e < 3 places the
# smallest integer base with natural log >= 1 at 3, and 7 < e^2 < 8 places the
# smallest integer base with natural log >= 2 at 8.
FREE_AMALGAMATION_MIN_BASE = 3
DIM_THEOREM_MIN_BASE = 8
SLOW_GROWTH_MIN_BASE = 3


@dataclass(frozen=True)
class LogBase:
    """f(x) = log_base(x + 1), base an integer >= 2."""

    base: int

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("log base must be an integer >= 2")


@dataclass(frozen=True)
class RationalTable:
    """Step function: f(x) = bound of the last entry with size <= x.

    Entries are (size, bound) with strictly increasing sizes and
    non-decreasing, non-negative bounds; sizes below the first entry get
    bound 0.
    """

    entries: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("table needs at least one entry")
        previous_size, previous_bound = -1, Fraction(0)
        for size, bound in self.entries:
            if size <= previous_size:
                raise ValueError("table sizes must strictly increase")
            if bound < previous_bound:
                raise ValueError("table bounds must not decrease")
            if size < 0 or bound < 0:
                raise ValueError("table entries must be non-negative")
            previous_size, previous_bound = size, bound

    def bound(self, size: int) -> Fraction:
        value = Fraction(0)
        for entry_size, entry_bound in self.entries:
            if entry_size > size:
                break
            value = entry_bound
        return value


ControlFunction = LogBase | RationalTable


def holds_at(f: ControlFunction, delta_value: int, size: int) -> bool:
    """Exact test of predimension >= f(size).

    For the logarithm shape, delta >= log_b(size+1) iff b^delta >= size + 1,
    decided over arbitrary-precision integers; false whenever delta < 0 since
    the bound is never negative.
    """
    if size < 0:
        raise ValueError("size must be >= 0")
    if isinstance(f, LogBase):
        if delta_value < 0:
            return False
        return f.base**delta_value >= size + 1
    return Fraction(delta_value) >= f.bound(size)


def threshold(f: ControlFunction, size: int) -> int:
    """Smallest integer predimension satisfying the bound at this size."""
    if isinstance(f, LogBase):
        t = 0
        power = 1
        while power < size + 1:
            power *= f.base
            t += 1
        return t
    bound = f.bound(size)
    return -((-bound.numerator) // bound.denominator)


def describe(f: ControlFunction) -> str:
    if isinstance(f, LogBase):
        return f"log:{f.base}"
    parts = ",".join(f"{size}:{bound}" for size, bound in f.entries)
    return f"table[{parts}]"


# ---------------------------------------------------------------------------
# parsing


def parse_control(spec: str, read_file: Callable[[str], str] | None = None) -> ControlFunction:
    """Parse 'log:<base>' or 'table:<path>' (path resolved via read_file)."""
    if spec.startswith("log:"):
        try:
            base = int(spec[4:])
        except ValueError:
            raise ValueError(f"bad log base in {spec!r}") from None
        return LogBase(base)
    if spec.startswith("table:"):
        path = spec[6:]
        if read_file is None:
            raise ValueError("table control function needs a file reader")
        return parse_table(read_file(path))
    raise ValueError(f"control function spec must start with log: or table:, got {spec!r}")


def parse_table(text: str) -> RationalTable:
    """One entry per line: '<size> <num>/<den>' or '<size> <int>'."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ValueError(f"table line {lineno}: expected '<size> <bound>'")
        try:
            size = int(tokens[0])
            bound = Fraction(tokens[1])
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"table line {lineno}: bad entry {line!r}") from None
        entries.append((size, bound))
    return RationalTable(tuple(entries))


def control_to_json(f: ControlFunction) -> dict:
    if isinstance(f, LogBase):
        return {"kind": "log", "base": f.base}
    return {
        "kind": "table",
        "entries": [[size, [bound.numerator, bound.denominator]] for size, bound in f.entries],
    }


def control_from_json(data: dict) -> ControlFunction:
    if data["kind"] == "log":
        return LogBase(int(data["base"]))
    entries = tuple(
        (int(size), Fraction(num, den)) for size, (num, den) in data["entries"]
    )
    return RationalTable(entries)


# ---------------------------------------------------------------------------
# good control functions


@dataclass(frozen=True)
class GoodFReport:
    """Flags for the three properties a control function may certify.

    `authoritative` is True for the logarithm shape, where the flags follow
    from recorded integer threshold constants; table shapes only get sampled
    necessary-condition checks, reported as non-authoritative.
    """

    free_amalgamation: bool
    dim_theorem: bool
    slow_growth: bool
    authoritative: bool

    @property
    def all_good(self) -> bool:
        return self.free_amalgamation and self.dim_theorem and self.slow_growth


def good_f_report(f: ControlFunction) -> GoodFReport:
    if isinstance(f, LogBase):
        return GoodFReport(
            free_amalgamation=f.base >= FREE_AMALGAMATION_MIN_BASE,
            dim_theorem=f.base >= DIM_THEOREM_MIN_BASE,
            slow_growth=f.base >= SLOW_GROWTH_MIN_BASE,
            authoritative=True,
        )
    horizon = 3 * (f.entries[-1][0] + 1)
    free_ok = all(
        f.bound(x + y) <= f.bound(x) + Fraction(y, x + 1)
        for x in range(horizon)
        for y in range(1, horizon - x)
    )
    dim_ok = all(
        f.bound(x + y) <= f.bound(x) + Fraction(y, 2 * (x + 1))
        for x in range(horizon)
        for y in range(1, horizon - x)
    )
    slow_ok = all(f.bound(3 * x) <= f.bound(x) + 1 for x in range(horizon))
    return GoodFReport(free_ok, dim_ok, slow_ok, authoritative=False)


# ---------------------------------------------------------------------------
# growth-class membership


@dataclass(frozen=True)
class KfResult:
    member: bool
    witness: tuple[int, ...] | None  # lex-minimum violator of minimum size

    def __bool__(self) -> bool:
        return self.member


def _lex_min_mask(violators: np.ndarray, n: int, target_size: int) -> tuple[int, ...]:
    """Lexicographically smallest point tuple among violating masks.

    Sorted point tuples compare first-element-first, which is not numeric
    mask order, so the mask is grown greedily: a prefix is kept when some
    violator has exactly that prefix as its low bits.  Columns of the
    reshaped table select masks by exact low bits without materializing
    indices.
    """
    chosen = 0
    points: list[int] = []
    next_point = 0
    for _ in range(target_size):
        for q in range(next_point, n):
            column = chosen | (1 << q)
            view = violators.reshape(-1, 1 << (q + 1))
            if bool(view[:, column].any()):
                chosen = column
                points.append(q)
                next_point = q + 1
                break
        else:
            raise AssertionError("violating mask vanished during extraction")
    return tuple(points)


def kf_member(s: FinStruct, f: ControlFunction, max_points: int | None = None) -> KfResult:
    """Exhaustive growth-class membership check.

    Violation means a nonempty subset with predimension below the control
    bound or below 1.  On failure the witness is the lexicographic-minimum
    violator among those of minimum size.  Structures above `max_points`
    (default 20) are refused; flowers at that scale have a parametric
    checker instead.
    """
    if max_points is None:
        max_points = 20
    if s.size > max_points:
        raise BudgetExceeded(
            f"{s.size} points exceed the {max_points}-point membership cap"
        )
    if s.size == 0:
        return KfResult(True, None)
    tables = tables_for(s)
    minima = tables.per_size_minima()
    cutoffs = [max(threshold(f, size), 1) for size in range(s.size + 1)]
    bad_size = None
    for size in range(1, s.size + 1):
        if minima[size] < cutoffs[size]:
            bad_size = size
            break
    if bad_size is None:
        return KfResult(True, None)
    violators = (tables.sizes == bad_size) & (tables.delta < cutoffs[bad_size])
    witness = _lex_min_mask(violators, s.size, bad_size)
    return KfResult(False, witness)


def check_free_amalgamation_instance(
    common: FinStruct,
    left: FinStruct,
    right: FinStruct,
    into_left,
    into_right,
    f: ControlFunction,
    max_points: int = 20,
) -> bool:
    """Glue two class members freely over a shared self-sufficient part and
    report whether the amalgam stays in the class with both images
    self-sufficient.  Precondition failures raise with distinct messages."""
    result = free_amalgam(left, right, common, into_left, into_right)
    if not is_self_sufficient(left, into_left):
        raise PreconditionError("common part is not self-sufficient in the left factor")
    if not is_self_sufficient(right, into_right):
        raise PreconditionError("common part is not self-sufficient in the right factor")
    if not kf_member(left, f, max_points=max_points):
        raise PreconditionError("left factor is outside the growth class")
    if not kf_member(right, f, max_points=max_points):
        raise PreconditionError("right factor is outside the growth class")
    glued = result.structure
    return bool(
        is_self_sufficient(glued, result.into_left)
        and is_self_sufficient(glued, result.into_right)
        and kf_member(glued, f, max_points=max_points)
    )
