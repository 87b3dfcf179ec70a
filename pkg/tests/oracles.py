"""Slow, independent reference implementations used only by the tests.

Nothing here touches the bitmask kernels or the Bareiss determinant: Grassmann
elements are dicts keyed by generator tuples in written order, determinants
use the Leibniz formula.
"""
from fractions import Fraction
from itertools import combinations, permutations


def perm_sign(seq):
    seq = list(seq)
    s = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def leibniz_det(rows):
    k = len(rows)
    if k == 0:
        return Fraction(1)
    total = Fraction(0)
    for p in permutations(range(k)):
        term = Fraction(perm_sign(p))
        for i in range(k):
            term *= rows[i][p[i]]
            if not term:
                break
        total += term
    return total


def normalize(word, order):
    """Sort a written monomial by ``order`` with bubble-sort sign tracking."""
    w = list(word)
    if len(set(w)) != len(w):
        return None, 0
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if order.index(w[i]) > order.index(w[i + 1]):
                w[i], w[i + 1] = w[i + 1], w[i]
                sign = -sign
                changed = True
    return tuple(w), sign


def g_element(pairs, order):
    """``{sorted word: coeff}`` from ``[(written word, coeff), ...]``."""
    out = {}
    for word, c in pairs:
        key, s = normalize(word, order)
        if key is None:
            continue
        out[key] = out.get(key, 0) + s * Fraction(c)
    return {k: v for k, v in out.items() if v}


def g_mul(x, y, order):
    pairs = [(wx + wy, cx * cy) for wx, cx in x.items() for wy, cy in y.items()]
    return g_element(pairs, order)


def berezin_once(x, g):
    """``∫ x da_g``: move ``a_g`` to the right end by adjacent swaps, drop it."""
    out = {}
    for word, c in x.items():
        if g not in word:
            continue
        i = word.index(g)
        sign = (-1) ** (len(word) - 1 - i)
        rest = word[:i] + word[i + 1:]
        out[rest] = out.get(rest, 0) + sign * c
    return {k: v for k, v in out.items() if v}


def berezin_first_listed_first(x, gens):
    for g in gens:
        x = berezin_once(x, g)
    return x


def gen_fun_oracle(rows, gens):
    """Leibniz-minor generating function keyed by sorted generator words."""
    r = len(rows)
    m = len(rows[0]) if rows else 0
    out = {}
    for cols in combinations(range(m), r):
        d = leibniz_det([[row[c] for c in cols] for row in rows])
        if d:
            out[tuple(gens[c] for c in cols)] = d
    return out


def from_element(el):
    """Convert a library GrassmannElement into the oracle's dict format."""
    return {tuple(gens): c for gens, c in el.monomials()}
