"""Pure-numpy worklist kernel: the fallback when numba is unavailable.

Facts are packed ints v*n*n + a*n + b; membership lives in two uint64 bitset
cubes, fwd[v, a] holding target bits and rev[v, b] holding source bits.  The
pop loop is Python, the per-rule partner probes are vectorized word ops.
"""

from __future__ import annotations

import random

import numpy as np

_ONE = np.uint64(1)


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
    """Run the fixpoint; returns (packed fact array, join-probe count).

    Seeds must already be set in fwd/rev.  Every fact enters the worklist
    exactly once; new facts are exactly the partner bits not yet present.
    """
    nn = n * n
    wl = [int(s) for s in seeds]
    head = 0
    probes = 0
    rng = random.Random(order_seed) if order_seed is not None else None
    while head < len(wl):
        if rng is not None:
            j = rng.randrange(head, len(wl))
            wl[head], wl[j] = wl[j], wl[head]
        fact = wl[head]
        head += 1
        v, r = divmod(fact, nn)
        a, b = divmod(r, n)

        # popped fact is the right child of vp -> u v: partners (u, a', a)
        for k in range(right_start[v], right_start[v + 1]):
            u = right_u[k]
            part = rev[u, a]
            count = int(np.bitwise_count(part).sum())
            if count == 0:
                continue
            probes += count
            vp = right_vp[k]
            new = part & ~rev[vp, b]
            if not new.any():
                continue
            bits = np.flatnonzero(
                np.unpackbits(new.view(np.uint8), bitorder="little")
            )
            rev[vp, b] |= new
            fwd[vp, bits, b >> 6] |= _ONE << np.uint64(b & 63)
            wl.extend((vp * nn + bits * n + b).tolist())

        # popped fact is the left child of vp -> v w: partners (w, b, b')
        for k in range(left_start[v], left_start[v + 1]):
            w = left_w[k]
            part = fwd[w, b]
            count = int(np.bitwise_count(part).sum())
            if count == 0:
                continue
            probes += count
            vp = left_vp[k]
            new = part & ~fwd[vp, a]
            if not new.any():
                continue
            bits = np.flatnonzero(
                np.unpackbits(new.view(np.uint8), bitorder="little")
            )
            fwd[vp, a] |= new
            rev[vp, bits, a >> 6] |= _ONE << np.uint64(a & 63)
            wl.extend((vp * nn + a * n + bits).tolist())

    return np.asarray(wl, dtype=np.int64), probes
