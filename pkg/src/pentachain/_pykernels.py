"""Pure-Python hot kernels.

These mirror ``_ckernels.pyx`` function-for-function; ``pentachain.kernels``
picks whichever is importable.
"""
from __future__ import annotations

from itertools import combinations


def det_int(rows):
    """Determinant of a square integer matrix by Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        rowk = m[k]
        pivot = rowk[k]
        for i in range(k + 1, n):
            rowi = m[i]
            mik = rowi[k]
            if mik == 0:
                for j in range(k + 1, n):
                    rowi[j] = rowi[j] * pivot // prev
            else:
                for j in range(k + 1, n):
                    rowi[j] = (rowi[j] * pivot - mik * rowk[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def rank_int(rows, ncols):
    """Rank of an integer matrix (fraction-free row reduction)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    rank = 0
    prev = 1
    for c in range(ncols):
        if rank == nrows:
            break
        piv = -1
        for r in range(rank, nrows):
            if m[r][c] != 0:
                piv = r
                break
        if piv < 0:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        rowk = m[rank]
        pivot = rowk[c]
        for i in range(rank + 1, nrows):
            rowi = m[i]
            mik = rowi[c]
            for j in range(c + 1, ncols):
                rowi[j] = (rowi[j] * pivot - mik * rowk[j]) // prev
            rowi[c] = 0
        prev = pivot
        rank += 1
    return rank


def merge_sign(mx, my):
    """Sign of the permutation sorting the concatenation of two disjoint monomials."""
    inv = 0
    while my:
        low = my & -my
        inv += (mx & ~((low << 1) - 1)).bit_count()
        my ^= low
    return -1 if inv & 1 else 1


def gmul(x, y):
    """Product of two Grassmann term dicts ``{bitmask: coeff}``."""
    acc = {}
    for mx, cx in x.items():
        for my, cy in y.items():
            if mx & my:
                continue
            c = cx * cy
            if merge_sign(mx, my) < 0:
                c = -c
            key = mx | my
            acc[key] = acc.get(key, 0) + c
    return {k: v for k, v in acc.items() if v != 0}


def berezin(x, bit):
    """Single Berezin integral over the generator with index ``bit``."""
    g = 1 << bit
    above = ~((g << 1) - 1)
    out = {}
    for m, c in x.items():
        if not m & g:
            continue
        # moving a_bit to the far right passes every generator above it
        if (m & above).bit_count() & 1:
            c = -c
        out[m ^ g] = c
    return out


def minor_dets(rows, ncols, size, forced=()):
    """Determinants of every ``size``-column minor of an integer matrix.

    ``forced`` columns are always included and placed rightmost (in the
    given order); the free columns run over ascending combinations of the
    remaining columns. Returns ``[(free_cols, det), ...]`` for nonzero dets.
    """
    forced = tuple(forced)
    free_pool = [c for c in range(ncols) if c not in set(forced)]
    k = size - len(forced)
    out = []
    if k < 0:
        return out
    for cols in combinations(free_pool, k):
        order = cols + forced
        sub = [[r[c] for c in order] for r in rows]
        d = det_int(sub)
        if d:
            out.append((cols, d))
    return out
