"""Grassmann algebra over exact scalars, Berezin integration, and
generating functions of rectangular matrices.

Monomials are stored as bitmasks over the algebra's generator table, so
``a_i a_j`` with ``i < j`` in the table order is the canonical form and every
other ordering picks up the sign of its sorting permutation.

Multiple Berezin integrals are iterated. By default the differential
written first acts first (``SEQUENTIAL``), under which
``∫∫ a1 a2 da1 da2 = -1``. The ``NESTED`` convention lets the last written
differential act first, which gives the factorisation
``∫∫ f(a) g(b) da db = ∫ f(a) da · ∫ g(b) db``; the two differ by the sign
of reversing the list.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

from . import kernels
from .matrix import ExactMatrix, _is_rational, scaled_integer_rows
from .scalar import as_scalar, format_scalar, parse_scalar

__all__ = [
    "DEFAULT_MAX_GENERATORS",
    "NESTED",
    "SEQUENTIAL",
    "GrassmannAlgebra",
    "GrassmannElement",
    "berezin",
    "berezin_multi",
    "g_mul",
    "gen_fun",
    "gen_fun_inner",
    "permutation_sign",
]

DEFAULT_MAX_GENERATORS = 64
SEQUENTIAL = "sequential"
NESTED = "nested"


def permutation_sign(seq: Sequence) -> int:
    """Sign of the permutation that sorts ``seq`` (distinct, comparable items)."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def generator_name(g) -> str:
    """Readable name; face-component pairs render as ``a_123_0``."""
    name = getattr(g, "name", None)
    if callable(name):
        return name()
    return str(g)


class GrassmannAlgebra:
    """A finite generator table with a fixed total order.

    If ``generators`` is given unsorted, the listed order is the algebra's
    order; pass ``sort=True`` to use the natural sort of the ids instead.
    """

    def __init__(self, generators: Iterable[Hashable], *, sort: bool = False,
                 max_generators: int = DEFAULT_MAX_GENERATORS):
        gens = list(generators)
        if sort:
            gens = sorted(gens)
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generator ids")
        if len(gens) > max_generators:
            raise ValueError(
                f"{len(gens)} generators exceed the configured maximum {max_generators}"
            )
        self.generators: tuple = tuple(gens)
        self.index = {g: i for i, g in enumerate(gens)}
        self.max_generators = max_generators

    def __len__(self) -> int:
        return len(self.generators)

    def __eq__(self, other) -> bool:
        return isinstance(other, GrassmannAlgebra) and self.generators == other.generators

    def __hash__(self) -> int:
        return hash(self.generators)

    def __repr__(self) -> str:
        return f"GrassmannAlgebra({len(self)} generators)"

    def zero(self) -> "GrassmannElement":
        return GrassmannElement(self, {})

    def one(self) -> "GrassmannElement":
        return GrassmannElement(self, {0: Fraction(1)})

    def scalar(self, c) -> "GrassmannElement":
        c = as_scalar(c)
        return GrassmannElement(self, {0: c} if c else {})

    def gen(self, g) -> "GrassmannElement":
        return GrassmannElement(self, {1 << self.index[g]: Fraction(1)})

    def monomial(self, gens: Sequence, coeff=1) -> "GrassmannElement":
        """``coeff * a_{g0} a_{g1} ...`` in the listed (possibly unsorted) order."""
        idx = [self.index[g] for g in gens]
        c = as_scalar(coeff)
        if len(set(idx)) != len(idx) or not c:
            return self.zero()
        mask = 0
        for i in idx:
            mask |= 1 << i
        return GrassmannElement(self, {mask: c * permutation_sign(idx)})

    def mask_of(self, gens: Iterable) -> int:
        mask = 0
        for g in gens:
            mask |= 1 << self.index[g]
        return mask

    def gens_of(self, mask: int) -> tuple:
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(self.generators[i])
            mask >>= 1
            i += 1
        return tuple(out)


class GrassmannElement:
    """Finite sum of canonical monomials with nonzero exact coefficients."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: GrassmannAlgebra, terms: Mapping[int, object]):
        self.algebra = algebra
        self.terms = {m: c for m, c in terms.items() if c}

    def _same(self, other: "GrassmannElement"):
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise ValueError("elements live in different Grassmann algebras")

    def __add__(self, other):
        if not isinstance(other, GrassmannElement):
            other = self.algebra.scalar(other)
        self._same(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, 0) + c
        return GrassmannElement(self.algebra, acc)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, GrassmannElement):
            other = self.algebra.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GrassmannElement):
            return g_mul(self, other)
        k = as_scalar(other)
        return GrassmannElement(self.algebra, {m: c * k for m, c in self.terms.items()})

    def __rmul__(self, other):
        k = as_scalar(other)
        return GrassmannElement(self.algebra, {m: k * c for m, c in self.terms.items()})

    def __truediv__(self, other):
        k = as_scalar(other)
        return GrassmannElement(self.algebra, {m: c / k for m, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, GrassmannElement):
            return self.algebra == other.algebra and self.terms == other.terms
        if not self.terms:
            return other == 0
        return set(self.terms) == {0} and self.terms[0] == other

    def __hash__(self):
        return hash((self.algebra, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (m.bit_count(), _rev_bits(m))):
            c = format_scalar(self.terms[m])
            gens = " ".join(generator_name(g) for g in self.algebra.gens_of(m))
            parts.append(f"({c}) {gens}".rstrip())
        return " + ".join(parts)

    def degrees(self) -> set[int]:
        return {m.bit_count() for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def coefficient(self, gens: Sequence = ()) -> object:
        """Coefficient of the monomial ``a_{g0} a_{g1} ...`` in the listed order."""
        idx = [self.algebra.index[g] for g in gens]
        if len(set(idx)) != len(idx):
            return Fraction(0)
        mask = 0
        for i in idx:
            mask |= 1 << i
        c = self.terms.get(mask, Fraction(0))
        return c * permutation_sign(idx)

    def monomials(self) -> list[tuple[tuple, object]]:
        """``[(sorted generator tuple, coeff), ...]`` in a canonical order."""
        keys = sorted(self.terms, key=lambda m: (m.bit_count(), _rev_bits(m)))
        return [(self.algebra.gens_of(m), self.terms[m]) for m in keys]

    def support(self) -> set:
        """Generators appearing in at least one monomial."""
        mask = 0
        for m in self.terms:
            mask |= m
        return set(self.algebra.gens_of(mask))

    def berezin(self, g) -> "GrassmannElement":
        return berezin(self, g)

    def berezin_multi(self, order: Sequence, convention: str = SEQUENTIAL) -> "GrassmannElement":
        return berezin_multi(self, order, convention)

    def to_json(self) -> list[dict]:
        return [
            {"monomial": [generator_name(g) for g in gens], "coeff": format_scalar(c)}
            for gens, c in self.monomials()
        ]

    @classmethod
    def from_json(cls, algebra: GrassmannAlgebra, data: list[dict]) -> "GrassmannElement":
        names = {generator_name(g): g for g in algebra.generators}
        out = algebra.zero()
        for item in data:
            gens = [names[s] for s in item["monomial"]]
            out = out + algebra.monomial(gens, parse_scalar(item["coeff"]))
        return out


def _rev_bits(m: int) -> tuple:
    """Sort key making monomials lexicographic in generator order."""
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def g_mul(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    x._same(y)
    return GrassmannElement(x.algebra, kernels.gmul(x.terms, y.terms))


def berezin(x: GrassmannElement, g) -> GrassmannElement:
    """``∫ x da_g`` via ``∫ da = 0``, ``∫ a da = 1`` and left-linearity."""
    return GrassmannElement(x.algebra, kernels.berezin(x.terms, x.algebra.index[g]))


def berezin_multi(x: GrassmannElement, order: Sequence, convention: str = SEQUENTIAL) -> GrassmannElement:
    """``∫…∫ x da_{order[0]} … da_{order[-1]}`` as iterated single integrals.

    ``SEQUENTIAL`` integrates ``order[0]`` first, ``NESTED`` integrates
    ``order[-1]`` first.
    """
    order = list(order)
    if convention == NESTED:
        order.reverse()
    elif convention != SEQUENTIAL:
        raise ValueError(f"unknown Berezin convention {convention!r}")
    terms = x.terms
    for g in order:
        terms = kernels.berezin(terms, x.algebra.index[g])
    return GrassmannElement(x.algebra, terms)


def _full_row_minors(A: ExactMatrix, forced: tuple[int, ...]):
    """Yield ``(free_cols, det)`` over all full-row minors containing
    ``forced`` columns placed rightmost; only nonzero determinants."""
    size = A.rows
    if _is_rational(A.entries):
        ints, scale = scaled_integer_rows(A.to_rows())
        for cols, d in kernels.minor_dets(ints, A.cols, size, forced):
            yield cols, Fraction(d, scale)
        return
    fs = set(forced)
    pool = [c for c in range(A.cols) if c not in fs]
    for cols in combinations(pool, size - len(forced)):
        d = A.submatrix(range(size), cols + forced).det()
        if d:
            yield cols, d


def _resolve(A: ExactMatrix, gens, algebra):
    if A.rows > A.cols:
        raise ValueError(f"generating function needs rows <= cols, got {A.rows}x{A.cols}")
    gens = list(gens)
    if len(gens) != A.cols:
        raise ValueError(f"need one generator per column: {A.cols} columns, {len(gens)} gens")
    if len(set(gens)) != len(gens):
        raise ValueError("generators must be distinct")
    if algebra is None:
        algebra = GrassmannAlgebra(gens)
    return gens, algebra


def _accumulate(algebra, gens, minors) -> GrassmannElement:
    idx = [algebra.index[g] for g in gens]
    increasing = all(a < b for a, b in zip(idx, idx[1:]))
    terms: dict[int, object] = {}
    for cols, d in minors:
        mask = 0
        for c in cols:
            mask |= 1 << idx[c]
        if not increasing and permutation_sign([idx[c] for c in cols]) < 0:
            d = -d
        terms[mask] = terms.get(mask, 0) + d
    return GrassmannElement(algebra, terms)


def gen_fun(A: ExactMatrix, gens: Sequence, algebra: GrassmannAlgebra | None = None) -> GrassmannElement:
    """Sum of ``det A|_C · prod_{k in C} a_k`` over full-row column subsets ``C``."""
    gens, algebra = _resolve(A, gens, algebra)
    return _accumulate(algebra, gens, _full_row_minors(A, ()))


def gen_fun_inner(A: ExactMatrix, gens: Sequence, inner: Iterable,
                  algebra: GrassmannAlgebra | None = None) -> GrassmannElement:
    """Generating function with the ``inner`` columns integrated out.

    Sums over column subsets containing every inner column; each minor is
    taken with the inner columns moved to the right (their relative column
    order kept) and only the outer generators remain in the monomial. This
    equals ``berezin_multi(gen_fun(A), inner_in_column_order, NESTED)``.
    """
    gens, algebra = _resolve(A, gens, algebra)
    inner = set(inner)
    missing = inner - set(gens)
    if missing:
        raise ValueError(f"inner generators not among the columns: {sorted(map(str, missing))}")
    forced = tuple(c for c, g in enumerate(gens) if g in inner)
    return _accumulate(algebra, gens, _full_row_minors(A, forced))
