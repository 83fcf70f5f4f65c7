"""Benchmark the compiled kernel extension against the NumPy fallback.

Runs the three hot paths (subset predimension tables, superset folds, the
cyclic pattern solver) on both backends, checks that outputs agree bit for
bit, and prints a timing table.  Exits nonzero if the backends disagree or
the compiled extension is missing.

Usage: python3 benchmarks/compare_backends.py [--points 22] [--modulus 101]
"""

from __future__ import annotations

import argparse
import random
import sys
import time

import numpy as np

from amalgam import _kernel_py

try:
    from amalgam import _kernel
except ImportError:
    _kernel = None


def best_time(fn, *args, repeats: int):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(name: str, args: tuple, fn_name: str, repeats: int) -> bool:
    t_py, out_py = best_time(getattr(_kernel_py, fn_name), *args, repeats=repeats)
    t_c, out_c = best_time(getattr(_kernel, fn_name), *args, repeats=repeats)
    agree = np.array_equal(np.asarray(out_py), np.asarray(out_c))
    speedup = t_py / t_c if t_c > 0 else float("inf")
    print(
        f"{name:<28} python {t_py * 1000:9.2f} ms   "
        f"compiled {t_c * 1000:9.2f} ms   x{speedup:5.1f}   "
        f"{'agree' if agree else 'DISAGREE'}"
    )
    return agree


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=22, help="ground set size")
    parser.add_argument("--tuples", type=int, default=40, help="instance count")
    parser.add_argument("--modulus", type=int, default=101)
    parser.add_argument("--length", type=int, default=3)
    parser.add_argument("--constraints", type=int, default=5000)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if _kernel is None:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1

    rng = random.Random(args.seed)
    n = args.points
    masks = [
        sum(1 << p for p in rng.sample(range(n), 3)) for _ in range(args.tuples)
    ]
    delta = _kernel_py.delta_table(n, masks)
    sizes = _kernel_py.size_table(n)
    space = args.modulus**args.length
    e_codes = np.array(
        sorted(rng.sample(range(space), min(args.constraints, space))), dtype=np.int64
    )

    print(f"backends: python={_kernel_py.BACKEND} vs compiled={_kernel.BACKEND}")
    print(
        f"tables over {n} points / {args.tuples} instances, "
        f"solver over modulus {args.modulus} length {args.length} "
        f"with {len(e_codes)} constraints\n"
    )
    ok = True
    ok &= bench("delta_table", (n, masks), "delta_table", args.repeats)
    ok &= bench("superset_min_table", (delta.copy(), n), "superset_min_table", args.repeats)
    ok &= bench("min_delta_per_size", (delta, sizes, n), "min_delta_per_size", args.repeats)
    ok &= bench(
        "cyclic_solutions",
        (args.modulus, args.length, e_codes),
        "cyclic_solutions",
        args.repeats,
    )
    if not ok:
        print("\nbackend outputs disagree", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
