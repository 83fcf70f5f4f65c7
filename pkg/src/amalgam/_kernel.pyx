# cython: language_level=3
"""Compiled accelerator for the subset tables and the cyclic solution scan.

Drop-in replacement for amalgam._kernel_py; the contracts (mask indexing,
big-endian digit codes, sorted outputs) are documented there.
"""

import numpy as np

from libc.stdint cimport int16_t, int64_t, uint8_t

cdef extern from *:
    int __builtin_popcountll(unsigned long long x)

BACKEND = "compiled"

MAX_TUPLES = 30_000


def size_table(int n):
    cdef int64_t total = (<int64_t>1) << n
    sizes_arr = np.zeros(total, dtype=np.uint8)
    cdef uint8_t[::1] sizes = sizes_arr
    cdef int64_t x
    for x in range(1, total):
        sizes[x] = sizes[x >> 1] + <uint8_t>(x & 1)
    return sizes_arr


def delta_table(int n, masks):
    masks_arr = np.ascontiguousarray(np.asarray(masks, dtype=np.int64))
    if masks_arr.shape[0] > MAX_TUPLES:
        raise ValueError(f"too many instances for int16 tables: {masks_arr.shape[0]}")
    cdef int64_t total = (<int64_t>1) << n
    delta_arr = np.zeros(total, dtype=np.int16)
    cdef int16_t[::1] delta = delta_arr
    cdef int64_t[::1] ms = masks_arr
    cdef Py_ssize_t k
    for k in range(ms.shape[0]):
        delta[ms[k]] += 1
    cdef int i
    cdef int64_t bit, step, start, x
    for i in range(n):
        bit = (<int64_t>1) << i
        step = bit << 1
        start = bit
        while start < total:
            for x in range(start, start + bit):
                delta[x] += delta[x - bit]
            start += step
    for x in range(total):
        delta[x] = <int16_t>__builtin_popcountll(<unsigned long long>x) - delta[x]
    return delta_arr


def superset_min_table(delta, int n):
    out_arr = np.array(delta, dtype=np.int16, copy=True)
    cdef int16_t[::1] out = out_arr
    cdef int64_t total = out.shape[0]
    cdef int i
    cdef int64_t bit, step, start, x
    for i in range(n):
        bit = (<int64_t>1) << i
        step = bit << 1
        start = bit
        while start < total:
            for x in range(start, start + bit):
                if out[x] < out[x - bit]:
                    out[x - bit] = out[x]
            start += step
    return out_arr


def min_delta_per_size(delta, sizes, int n):
    cdef const int16_t[::1] d = np.ascontiguousarray(delta, dtype=np.int16)
    cdef const uint8_t[::1] sz = np.ascontiguousarray(sizes, dtype=np.uint8)
    out_arr = np.full(n + 1, np.iinfo(np.int16).max, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef int64_t x
    for x in range(d.shape[0]):
        if d[x] < out[sz[x]]:
            out[sz[x]] = d[x]
    return [int(v) for v in out_arr]


def cyclic_solutions(int64_t modulus, int length, e_codes):
    e_arr = np.ascontiguousarray(np.asarray(e_codes, dtype=np.int64))
    cdef int64_t N = modulus
    cdef int n = length
    if n < 3 or n > 30:
        raise ValueError("tuple length out of range")

    cdef int64_t space = 1
    cdef int j
    for j in range(n - 1):
        space *= N

    member_arr = np.zeros((n - 1, space), dtype=np.uint8)
    cdef uint8_t[:, ::1] member = member_arr
    cdef const int64_t[::1] codes = e_arr
    cdef int64_t[32] pws
    pws[n] = 1
    for j in range(n - 1, 0, -1):
        pws[j] = pws[j + 1] * N
    cdef Py_ssize_t k
    cdef int64_t c, pw
    for j in range(1, n):
        pw = pws[j]
        for k in range(codes.shape[0]):
            c = codes[k]
            member[j - 1, (c // (pw * N)) * pw + c % pw] = 1

    prefixes_arr = np.unique(e_arr // N)
    cdef const int64_t[::1] prefixes = prefixes_arr
    cdef int64_t[32] drops
    cdef int64_t p, last, count, idx
    cdef int ok
    cdef int64_t[::1] out

    count = 0
    for k in range(prefixes.shape[0]):
        p = prefixes[k]
        for j in range(1, n):
            pw = pws[j + 1]
            drops[j - 1] = (p // (pw * N)) * pw + p % pw
        for last in range(N):
            ok = 1
            for j in range(n - 1):
                if not member[j, drops[j] * N + last]:
                    ok = 0
                    break
            count += ok

    out_arr = np.empty(count, dtype=np.int64)
    out = out_arr
    idx = 0
    for k in range(prefixes.shape[0]):
        p = prefixes[k]
        for j in range(1, n):
            pw = pws[j + 1]
            drops[j - 1] = (p // (pw * N)) * pw + p % pw
        for last in range(N):
            ok = 1
            for j in range(n - 1):
                if not member[j, drops[j] * N + last]:
                    ok = 0
                    break
            if ok:
                out[idx] = p * N + last
                idx += 1
    return out_arr
