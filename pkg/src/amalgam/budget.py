"""Enumeration budgets.

Exhaustive scans (subset tables, solution enumeration, glued materialization)
refuse to start when their work estimate exceeds the active budget.  The
AMALGAM_BUDGET environment variable raises or lowers every default at once;
explicit function arguments override both.
"""

from __future__ import annotations

import os

DEFAULT_ENUMERATION_BUDGET = 10_000_000
DEFAULT_SUBSET_POINTS = 20
MAX_SUBSET_POINTS = 26  # 2^26 int16 table = 128 MiB; hard ceiling
DEFAULT_GLUED_POINTS = 100_000


class BudgetExceeded(RuntimeError):
    """The requested enumeration is larger than the active budget allows."""


def _env_budget() -> int | None:
    raw = os.environ.get("AMALGAM_BUDGET")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise BudgetExceeded(f"AMALGAM_BUDGET is not an integer: {raw!r}") from None
    if value < 1:
        raise BudgetExceeded(f"AMALGAM_BUDGET must be positive: {value}")
    return value


def enumeration_budget(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    env = _env_budget()
    return env if env is not None else DEFAULT_ENUMERATION_BUDGET


def subset_points_cap(override: int | None = None) -> int:
    """Point-count cap for full subset enumeration (2^n work)."""
    if override is not None:
        return min(int(override), MAX_SUBSET_POINTS)
    env = _env_budget()
    if env is not None:
        cap = DEFAULT_SUBSET_POINTS
        while cap < MAX_SUBSET_POINTS and 2 ** (cap + 1) <= env:
            cap += 1
        return cap
    return DEFAULT_SUBSET_POINTS


def glued_points_cap(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    env = _env_budget()
    return env if env is not None else DEFAULT_GLUED_POINTS
