"""Numba-compiled worklist kernel, bit-identical in outcome to the numpy one.

Importing this module requires numba; the recognizer falls back to the numpy
kernel when the import fails or CFRDF_KERNEL=numpy is set.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_U0 = np.uint64(0)
_U1 = np.uint64(1)
_U2 = np.uint64(2)
_U4 = np.uint64(4)
_U56 = np.uint64(56)


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> _U1) & _M1)
    x = (x & _M2) + ((x >> _U2) & _M2)
    x = (x + (x >> _U4)) & _M4
    return (x * _H01) >> _U56


@njit(cache=True)
def _run(
    n,
    words,
    fwd,
    rev,
    seeds,
    right_start,
    right_vp,
    right_u,
    left_start,
    left_vp,
    left_w,
    order_seed,
):
    nn = n * n
    wl = np.empty(seeds.size * 2 + 64, np.int64)
    wl[: seeds.size] = seeds
    tail = seeds.size
    head = 0
    probes = 0
    randomized = order_seed >= 0
    state = np.uint64(order_seed * 2 + 1)
    while head < tail:
        if randomized and tail - head > 1:
            state ^= state << np.uint64(13)
            state ^= state >> np.uint64(7)
            state ^= state << np.uint64(17)
            j = head + np.int64(state % np.uint64(tail - head))
            tmp = wl[head]
            wl[head] = wl[j]
            wl[j] = tmp
        fact = wl[head]
        head += 1
        v = fact // nn
        r = fact - v * nn
        a = r // n
        b = r - a * n

        bw = b >> 6
        bbit = _U1 << np.uint64(b & 63)
        for k in range(right_start[v], right_start[v + 1]):
            u = right_u[k]
            vp = right_vp[k]
            for wd in range(words):
                part = rev[u, a, wd]
                if part == _U0:
                    continue
                probes += np.int64(_popcount(part))
                new = part & ~rev[vp, b, wd]
                while new != _U0:
                    low = new & (_U0 - new)
                    ap = wd * 64 + np.int64(_popcount(low - _U1))
                    rev[vp, b, wd] |= low
                    fwd[vp, ap, bw] |= bbit
                    if tail == wl.size:
                        bigger = np.empty(wl.size * 2, np.int64)
                        bigger[:tail] = wl
                        wl = bigger
                    wl[tail] = vp * nn + ap * n + b
                    tail += 1
                    new ^= low

        aw = a >> 6
        abit = _U1 << np.uint64(a & 63)
        for k in range(left_start[v], left_start[v + 1]):
            w = left_w[k]
            vp = left_vp[k]
            for wd in range(words):
                part = fwd[w, b, wd]
                if part == _U0:
                    continue
                probes += np.int64(_popcount(part))
                new = part & ~fwd[vp, a, wd]
                while new != _U0:
                    low = new & (_U0 - new)
                    bp = wd * 64 + np.int64(_popcount(low - _U1))
                    fwd[vp, a, wd] |= low
                    rev[vp, bp, aw] |= abit
                    if tail == wl.size:
                        bigger = np.empty(wl.size * 2, np.int64)
                        bigger[:tail] = wl
                        wl = bigger
                    wl[tail] = vp * nn + a * n + bp
                    tail += 1
                    new ^= low
    return wl[:tail], probes


def solve_kernel(
    n_nt,
    n,
    words,
    fwd,
    rev,
    seeds,
    right_start,
    right_vp,
    right_u,
    left_start,
    left_vp,
    left_w,
    order_seed,
):
    facts, probes = _run(
        n,
        words,
        fwd,
        rev,
        seeds,
        right_start,
        right_vp,
        right_u,
        left_start,
        left_vp,
        left_w,
        -1 if order_seed is None else int(order_seed),
    )
    return np.asarray(facts, dtype=np.int64).copy(), int(probes)
