# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the kernels in ``_pykernels``."""
from itertools import combinations


def det_int(rows):
    cdef Py_ssize_t n = len(rows)
    cdef Py_ssize_t k, i, j, r
    cdef int sign = 1
    cdef list m, rowk, rowi
    cdef object pivot, prev, mik
    if n == 0:
        return 1
    m = [list(x) for x in rows]
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
        rowk = <list>m[k]
        pivot = rowk[k]
        for i in range(k + 1, n):
            rowi = <list>m[i]
            mik = rowi[k]
            if mik == 0:
                for j in range(k + 1, n):
                    rowi[j] = rowi[j] * pivot // prev
            else:
                for j in range(k + 1, n):
                    rowi[j] = (rowi[j] * pivot - mik * rowk[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def rank_int(rows, Py_ssize_t ncols):
    cdef list m = [list(x) for x in rows]
    cdef Py_ssize_t nrows = len(m)
    cdef Py_ssize_t rank = 0, c, r, i, j, piv
    cdef list rowk, rowi
    cdef object prev = 1, pivot, mik
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
        rowk = <list>m[rank]
        pivot = rowk[c]
        for i in range(rank + 1, nrows):
            rowi = <list>m[i]
            mik = rowi[c]
            for j in range(c + 1, ncols):
                rowi[j] = (rowi[j] * pivot - mik * rowk[j]) // prev
            rowi[c] = 0
        prev = pivot
        rank += 1
    return rank


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _sign64(unsigned long long mx, unsigned long long my) nogil:
    cdef unsigned long long low
    cdef int inv = 0
    while my:
        low = my & (~my + 1)
        inv += __builtin_popcountll(mx & ~((low << 1) - 1))
        my ^= low
    return -1 if inv & 1 else 1


def merge_sign(mx, my):
    cdef int inv = 0
    if mx < (1 << 64) and my < (1 << 64):
        return _sign64(mx, my)
    while my:
        low = my & -my
        inv += bin(mx & ~((low << 1) - 1)).count("1")
        my ^= low
    return -1 if inv & 1 else 1


def gmul(dict x, dict y):
    cdef dict acc = {}
    cdef unsigned long long ux, uy
    cdef bint narrow = True
    for mx in x:
        if mx >= (1 << 64):
            narrow = False
    for my in y:
        if my >= (1 << 64):
            narrow = False
    if not narrow:
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
    for mx, cx in x.items():
        ux = mx
        for my, cy in y.items():
            uy = my
            if ux & uy:
                continue
            c = cx * cy
            if _sign64(ux, uy) < 0:
                c = -c
            key = ux | uy
            prev = acc.get(key)
            acc[key] = c if prev is None else prev + c
    return {k: v for k, v in acc.items() if v != 0}


def berezin(dict x, Py_ssize_t bit):
    g = 1 << bit
    above = ~((g << 1) - 1)
    cdef dict out = {}
    for m, c in x.items():
        if not m & g:
            continue
        if bin(m & above).count("1") & 1:
            c = -c
        out[m ^ g] = c
    return out


def minor_dets(rows, Py_ssize_t ncols, Py_ssize_t size, forced=()):
    forced = tuple(forced)
    fs = set(forced)
    free_pool = [c for c in range(ncols) if c not in fs]
    cdef Py_ssize_t k = size - len(forced)
    cdef list out = []
    if k < 0:
        return out
    for cols in combinations(free_pool, k):
        order = cols + forced
        sub = [[r[c] for c in order] for r in rows]
        d = det_int(sub)
        if d:
            out.append((cols, d))
    return out
