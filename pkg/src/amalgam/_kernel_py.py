"""Pure NumPy fallback for the hot kernels.

Same contract as the compiled extension (amalgam._kernel): subset tables are
indexed by point bitmask, solution arrays use big-endian base-N digit codes so
numeric order equals lexicographic tuple order.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"

# int16 subset tables bound the instance count; 26 points bound the masks
MAX_TUPLES = 30_000


def size_table(n: int) -> np.ndarray:
    """Popcount of every mask below 2^n, as uint8."""
    sizes = np.zeros(1, dtype=np.uint8)
    for _ in range(n):
        sizes = np.concatenate([sizes, sizes + 1])
    return sizes


def delta_table(n: int, masks) -> np.ndarray:
    """Predimension of every subset: popcount minus instances inside.

    Subset-sum dynamic programming: seed each instance at its own mask, then
    fold every bit upward so counts[X] ends as the number of instances whose
    mask is contained in X.
    """
    masks = np.asarray(masks, dtype=np.int64)
    if len(masks) > MAX_TUPLES:
        raise ValueError(f"too many instances for int16 tables: {len(masks)}")
    counts = np.zeros(1 << n, dtype=np.int16)
    if len(masks):
        np.add.at(counts, masks, np.int16(1))
    for i in range(n):
        view = counts.reshape(-1, 2, 1 << i)
        view[:, 1, :] += view[:, 0, :]
    delta = size_table(n).astype(np.int16)
    delta -= counts
    return delta


def superset_min_table(delta: np.ndarray, n: int) -> np.ndarray:
    """min over supersets (the set itself included) of the predimension."""
    out = delta.copy()
    for i in range(n):
        view = out.reshape(-1, 2, 1 << i)
        np.minimum(view[:, 0, :], view[:, 1, :], out=view[:, 0, :])
    return out


def min_delta_per_size(delta: np.ndarray, sizes: np.ndarray, n: int) -> list[int]:
    """Minimum predimension among subsets of each cardinality 0..n."""
    sentinel = np.int16(np.iinfo(np.int16).max)
    out = []
    for s in range(n + 1):
        out.append(int(np.min(delta, where=(sizes == s), initial=sentinel)))
    return out


def cyclic_solutions(modulus: int, length: int, e_codes) -> np.ndarray:
    """All tuples whose every drop-one-coordinate projection lands in the
    corresponding projection of E.

    E is a set of big-endian base-`modulus` codes of length-`length` tuples.
    Candidates are (prefix in the drop-last projection of E) x (last digit),
    which already covers the drop-last condition; the remaining projections
    are tested through boolean membership tables.  Output codes are sorted,
    so iteration order is lexicographic.
    """
    N, n = int(modulus), int(length)
    e_codes = np.asarray(e_codes, dtype=np.int64)
    space = N ** (n - 1)

    member = []
    for j in range(1, n):  # drop coordinate j (1-indexed, big-endian)
        pw = N ** (n - j)
        dropped = (e_codes // (pw * N)) * pw + e_codes % pw
        table = np.zeros(space, dtype=bool)
        table[dropped] = True
        member.append(table)

    prefixes = np.unique(e_codes // N)
    pref_drop = []
    for j in range(1, n):
        pw = N ** (n - 1 - j)
        pref_drop.append((prefixes // (pw * N)) * pw + prefixes % pw)

    chunks = []
    for last in range(N):
        ok = np.ones(len(prefixes), dtype=bool)
        for j in range(n - 1):
            ok &= member[j][pref_drop[j] * N + last]
        if ok.any():
            chunks.append(prefixes[ok] * N + last)
    if not chunks:
        return np.empty(0, dtype=np.int64)
    return np.sort(np.concatenate(chunks))
