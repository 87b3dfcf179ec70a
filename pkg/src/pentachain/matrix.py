"""Dense exact matrices over rationals or Gaussian rationals."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from . import kernels
from .scalar import GaussianRational, as_scalar, format_scalar, parse_scalar

__all__ = [
    "ExactMatrix",
    "SingularMatrix",
    "det",
    "inverse",
    "rank",
    "submatrix",
    "scaled_integer_rows",
    "independent_rows",
    "nullspace",
    "rref",
    "solve",
]


class SingularMatrix(ZeroDivisionError):
    """Raised when an inverse is requested for a singular matrix.

    ``simplex`` names the offending simplex when the caller knows it.
    """

    def __init__(self, message: str = "matrix is singular", simplex=None):
        if simplex is not None:
            message = f"{message} (at simplex {simplex})"
        super().__init__(message)
        self.simplex = simplex


def _is_rational(entries) -> bool:
    return all(type(e) is Fraction for e in entries)


def scaled_integer_rows(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], int]:
    """Clear denominators row by row.

    Returns ``(int_rows, scale)`` with ``int_rows[i] = rows[i] * s_i`` and
    ``scale = prod(s_i)``, so any full-row minor of the original matrix is
    the matching integer minor divided by ``scale``.
    """
    out = []
    scale = 1
    for row in rows:
        s = lcm(*(q.denominator for q in row)) if row else 1
        out.append([q.numerator * (s // q.denominator) for q in row])
        scale *= s
    return out, scale


class ExactMatrix:
    """Immutable dense row-major matrix of exact scalars."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(as_scalar(e) for e in entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise ValueError(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._hash = None

    # construction -----------------------------------------------------

    @classmethod
    def _raw(cls, rows: int, cols: int, entries: tuple) -> "ExactMatrix":
        m = object.__new__(cls)
        m.rows, m.cols, m.entries, m._hash = rows, cols, entries, None
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, (e for r in rows for e in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls._raw(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def scalar(cls, value, n: int = 1) -> "ExactMatrix":
        v = as_scalar(value)
        zero = Fraction(0)
        return cls._raw(n, n, tuple(v if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def column(cls, values: Sequence) -> "ExactMatrix":
        return cls(len(values), 1, values)

    @classmethod
    def block(cls, blocks: Sequence[Sequence["ExactMatrix"]]) -> "ExactMatrix":
        """Assemble a block matrix; every block row must share heights."""
        out_rows: list[list] = []
        for brow in blocks:
            h = brow[0].rows
            if any(b.rows != h for b in brow):
                raise ValueError("block heights differ within a block row")
            for i in range(h):
                r: list = []
                for b in brow:
                    r.extend(b.entries[i * b.cols:(i + 1) * b.cols])
                out_rows.append(r)
        cols = sum(b.cols for b in blocks[0]) if blocks else 0
        return cls._raw(len(out_rows), cols, tuple(e for r in out_rows for e in r))

    @staticmethod
    def vstack(mats: Sequence["ExactMatrix"]) -> "ExactMatrix":
        if not mats:
            raise ValueError("nothing to stack")
        cols = mats[0].cols
        if any(m.cols != cols for m in mats):
            raise ValueError("column counts differ")
        return ExactMatrix._raw(sum(m.rows for m in mats), cols, sum((m.entries for m in mats), ()))

    @staticmethod
    def hstack(mats: Sequence["ExactMatrix"]) -> "ExactMatrix":
        return ExactMatrix.block([list(mats)])

    # access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def col(self, j: int) -> "ExactMatrix":
        return self.submatrix(range(self.rows), [j])

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # arithmetic ---------------------------------------------------------

    def _check_same(self, other: "ExactMatrix"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check_same(other)
        return ExactMatrix._raw(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check_same(other)
        return ExactMatrix._raw(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return ExactMatrix._raw(self.rows, self.cols, tuple(-a for a in self.entries))

    def __mul__(self, k):
        if isinstance(k, ExactMatrix):
            return NotImplemented
        k = as_scalar(k)
        return ExactMatrix._raw(self.rows, self.cols, tuple(a * k for a in self.entries))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        a, b = self.entries, other.entries
        n, m, p = self.rows, self.cols, other.cols
        bcols = [b[j::p] for j in range(p)]
        out = []
        zero = Fraction(0)
        for i in range(n):
            ai = a[i * m:(i + 1) * m]
            for j in range(p):
                s = zero
                for x, y in zip(ai, bcols[j]):
                    if x and y:
                        s = s + x * y
                out.append(s)
        return ExactMatrix._raw(n, p, tuple(out))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.entries))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(", ".join(format_scalar(e) for e in self.row(i)) for i in range(self.rows))
        return f"ExactMatrix({self.rows}x{self.cols}: [{body}])"

    # linear algebra -----------------------------------------------------

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix._raw(
            self.cols, self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    T = property(transpose)

    def submatrix(self, row_set: Iterable[int], col_set: Iterable[int]) -> "ExactMatrix":
        rs, cs = list(row_set), list(col_set)
        for i in rs:
            if not 0 <= i < self.rows:
                raise IndexError(f"row index {i} out of range for {self.rows} rows")
        for j in cs:
            if not 0 <= j < self.cols:
                raise IndexError(f"column index {j} out of range for {self.cols} columns")
        e, c = self.entries, self.cols
        return ExactMatrix._raw(len(rs), len(cs), tuple(e[i * c + j] for i in rs for j in cs))

    def det(self):
        if not self.is_square():
            raise ValueError(f"determinant of non-square {self.rows}x{self.cols} matrix")
        if self.rows == 0:
            return Fraction(1)
        if _is_rational(self.entries):
            ints, scale = scaled_integer_rows(self.to_rows())
            return Fraction(kernels.det_int(ints), scale)
        return _det_field(self.to_rows())

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        if _is_rational(self.entries):
            ints, _ = scaled_integer_rows(self.to_rows())
            return kernels.rank_int(ints, self.cols)
        return len(independent_rows(self))

    def inverse(self, simplex=None) -> "ExactMatrix":
        if not self.is_square():
            raise ValueError("inverse of non-square matrix")
        n = self.rows
        a = [list(self.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for k in range(n):
            piv = next((r for r in range(k, n) if a[r][k]), None)
            if piv is None:
                raise SingularMatrix(simplex=simplex)
            a[k], a[piv] = a[piv], a[k]
            inv_p = 1 / a[k][k]
            a[k] = [x * inv_p for x in a[k]]
            rk = a[k]
            for r in range(n):
                if r != k and a[r][k]:
                    f = a[r][k]
                    a[r] = [x - f * y for x, y in zip(a[r], rk)]
        return ExactMatrix._raw(n, n, tuple(x for r in a for x in r[n:]))

    # serialization ------------------------------------------------------

    def to_json(self) -> list[list[str]]:
        return [[format_scalar(e) for e in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, data) -> "ExactMatrix":
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise ValueError("matrix JSON must be a list of lists")
        return cls.from_rows([[parse_scalar(x) if isinstance(x, str) else as_scalar(x) for x in r] for r in data])


def _det_field(rows: list[list]):
    """Plain Gaussian elimination over any exact field."""
    a = [list(r) for r in rows]
    n = len(a)
    d = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            d = -d
        p = a[k][k]
        d = d * p
        for r in range(k + 1, n):
            if a[r][k]:
                f = a[r][k] / p
                a[r] = [x - f * y for x, y in zip(a[r], a[k])]
    return d


def independent_rows(m: ExactMatrix) -> list[int]:
    """Greedy (first-come) maximal set of linearly independent rows."""
    basis: list[tuple[int, list]] = []  # (pivot column, reduced row)
    chosen = []
    for i in range(m.rows):
        r = list(m.row(i))
        for pc, b in basis:
            if r[pc]:
                f = r[pc] / b[pc]
                r = [x - f * y for x, y in zip(r, b)]
        pc = next((j for j, x in enumerate(r) if x), None)
        if pc is not None:
            basis.append((pc, r))
            chosen.append(i)
    return chosen


def rref(m: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = m.to_rows()
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, m.rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv_p = 1 / a[r][c]
        a[r] = [x * inv_p for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return ExactMatrix.from_rows(a, m.cols), pivots


def nullspace(m: ExactMatrix) -> ExactMatrix:
    """Columns form a basis of the right kernel (``m.cols x k``)."""
    red, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    cols = []
    for fc in free:
        v = [Fraction(0)] * m.cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r, fc]
        cols.append(v)
    if not cols:
        return ExactMatrix.zeros(m.cols, 0)
    return ExactMatrix.from_rows(cols, m.cols).transpose()


def solve(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Exact solution ``x`` of ``a @ x == b`` for full-column-rank ``a``."""
    if a.rows != b.rows:
        raise ValueError("row counts differ")
    aug = ExactMatrix.hstack([a, b])
    red, pivots = rref(aug)
    if any(p >= a.cols for p in pivots):
        raise ValueError("inconsistent linear system")
    if len(pivots) != a.cols:
        raise ValueError("system is underdetermined")
    return red.submatrix(range(a.cols), range(a.cols, aug.cols))


def det(m: ExactMatrix):
    return m.det()


def inverse(m: ExactMatrix, simplex=None) -> ExactMatrix:
    return m.inverse(simplex=simplex)


def rank(m: ExactMatrix) -> int:
    return m.rank()


def submatrix(m: ExactMatrix, row_set, col_set) -> ExactMatrix:
    return m.submatrix(row_set, col_set)


def is_gaussian(m: ExactMatrix) -> bool:
    return any(isinstance(e, GaussianRational) for e in m.entries)
