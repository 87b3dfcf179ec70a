"""Vertex coordinates and the nonlinear maps F1, F2, F3.

``F1`` sends affine parameters ``(a, b)`` to points ``z_i = zeta_i a + b``;
``F2`` sends points to face matrices ``phi``; ``F3`` sends face matrices to
per-vertex tetrahedron matrices ``psi``. Composites are constant, and their
differentials at ``z = zeta`` are the linear maps of the chain complex; the
``differential_*`` functions evaluate them on dual matrices to check that.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

from .dual import DualMatrix
from .grassmann import permutation_sign
from .matrix import ExactMatrix, SingularMatrix

__all__ = [
    "AffineParams",
    "ConsistencyError",
    "CoordinateAssignment",
    "SamplingError",
    "differential_f2",
    "differential_f3",
    "even_ordering",
    "f1_apply",
    "f2_apply",
    "f3_apply",
    "phi_direct",
    "phi_permuted",
    "random_coordinates",
    "random_matrix",
    "random_rational",
]


class ConsistencyError(AssertionError):
    """A dual-number differential disagreed with its closed-form linear map."""


class SamplingError(RuntimeError):
    """Random coordinates kept violating invertibility after all retries."""


@dataclass(frozen=True)
class CoordinateAssignment:
    n: int
    zeta: Mapping[int, ExactMatrix]
    _inv: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "zeta", dict(self.zeta))
        for v, m in self.zeta.items():
            if m.shape != (self.n, self.n):
                raise ValueError(f"coordinate of vertex {v} is {m.shape}, expected {self.n}x{self.n}")

    @classmethod
    def scalars(cls, values: Mapping[int, object] | Sequence) -> "CoordinateAssignment":
        """n = 1 coordinates; a sequence is labelled 1, 2, 3, ..."""
        if not isinstance(values, Mapping):
            values = {i + 1: x for i, x in enumerate(values)}
        return cls(1, {v: ExactMatrix.scalar(x) for v, x in values.items()})

    def __getitem__(self, v: int) -> ExactMatrix:
        return self.zeta[v]

    def __contains__(self, v) -> bool:
        return v in self.zeta

    def diff(self, i: int, j: int) -> ExactMatrix:
        return self.zeta[i] - self.zeta[j]

    def diff_inv(self, i: int, j: int) -> ExactMatrix:
        key = (i, j)
        if key not in self._inv:
            self._inv[key] = self.diff(i, j).inverse(simplex=(i, j))
        return self._inv[key]

    def det_diff(self, i: int, j: int):
        return self.diff(i, j).det()

    def scalar(self, v: int):
        if self.n != 1:
            raise ValueError("scalar coordinates need n = 1")
        return self.zeta[v][0, 0]

    def with_vertex(self, v: int, m: ExactMatrix) -> "CoordinateAssignment":
        z = dict(self.zeta)
        z[v] = m
        return CoordinateAssignment(self.n, z)

    def singular_pairs(self, pairs: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
        return [(i, j) for i, j in pairs if self.diff(i, j).det() == 0]

    def identity(self) -> ExactMatrix:
        return ExactMatrix.identity(self.n)


@dataclass(frozen=True)
class AffineParams:
    a: ExactMatrix
    b: ExactMatrix

    def __post_init__(self):
        if self.a.det() == 0:
            raise SingularMatrix("affine parameter a must be invertible")


PointAssignment = Mapping  # vertex -> ExactMatrix or DualMatrix


# sampling -----------------------------------------------------------------


def random_rational(rng: random.Random, bound: int = 100) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_matrix(rng: random.Random, n: int, bound: int = 100) -> ExactMatrix:
    return ExactMatrix(n, n, [random_rational(rng, bound) for _ in range(n * n)])


def random_coordinates(vertices: Iterable[int], n: int, rng: random.Random | int = 0,
                       bound: int = 100, retries: int = 16,
                       fixed: CoordinateAssignment | None = None) -> CoordinateAssignment:
    """Random coordinates with every pairwise difference invertible.

    Each vertex is redrawn at most ``retries`` times before giving up with
    :class:`SamplingError`. Vertices already present in ``fixed`` keep
    their coordinates.
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    zeta = dict(fixed.zeta) if fixed is not None else {}
    for v in sorted(vertices):
        if v in zeta:
            continue
        for _ in range(retries + 1):
            m = random_matrix(rng, n, bound)
            if all((m - other).det() != 0 for other in zeta.values()):
                zeta[v] = m
                break
        else:
            raise SamplingError(f"could not place vertex {v} after {retries} retries")
    return CoordinateAssignment(n, zeta)


# F1, F2, F3 ---------------------------------------------------------------


def f1_apply(params: AffineParams, zeta: CoordinateAssignment) -> dict:
    """``z_i = zeta_i a + b`` for every vertex."""
    return {v: m @ params.a + params.b for v, m in zeta.zeta.items()}


def _inv(m, simplex=None):
    return m.inverse(simplex=simplex)


def phi_direct(z: PointAssignment, zeta: CoordinateAssignment, ordered: Sequence[int]):
    """``zeta_ij^-1 z_ij z_ik^-1 zeta_ik`` for the triple in the given order."""
    i, j, k = ordered
    z_ij = z[i] - z[j]
    z_ik = z[i] - z[k]
    return zeta.diff_inv(i, j) @ z_ij @ _inv(z_ik, (i, k)) @ zeta.diff(i, k)


def f2_apply(z: PointAssignment, zeta: CoordinateAssignment, face: Sequence[int]):
    i, j, k = face
    if not i < j < k:
        raise ValueError(f"face {tuple(face)} must be given in ascending order")
    return phi_direct(z, zeta, face)


def _rotate(phi_ijk, zeta: CoordinateAssignment, i: int, j: int, k: int):
    """phi_kij from phi_ijk using
    ``zeta_ij^-1 zeta_ik - phi_ijk = -zeta_ji^-1 zeta_jk phi_kij^-1``."""
    lhs = zeta.diff_inv(i, j) @ zeta.diff(i, k) - phi_ijk
    coef = -(zeta.diff_inv(j, i) @ zeta.diff(j, k))
    phi_kij_inv = _inv(coef, (i, j, k)) @ lhs
    return _inv(phi_kij_inv, (k, i, j))


def phi_permuted(phi_sorted: Callable[[tuple], object] | Mapping, zeta: CoordinateAssignment,
                 ordered: Sequence[int]):
    """phi for any vertex order, from the ascending-order value alone.

    Uses ``phi_ikj = phi_ijk^-1`` and the rotation relation; ``phi_sorted``
    maps an ascending triple to its matrix (plain or dual).
    """
    get = phi_sorted if callable(phi_sorted) else phi_sorted.__getitem__
    i, j, k = sorted(ordered)
    target = tuple(ordered)
    cur = (i, j, k)
    val = get(cur)
    for _ in range(3):
        if cur == target:
            return val
        swapped = (cur[0], cur[2], cur[1])
        if swapped == target:
            return _inv(val, swapped)
        val = _rotate(val, zeta, *cur)
        cur = (cur[2], cur[0], cur[1])
    raise ValueError(f"{target} is not a permutation of {(i, j, k)}")


def even_ordering(tetra: Sequence[int], v: int) -> tuple:
    """Even permutation of the ascending tetrahedron that starts with ``v``."""
    vs = tuple(sorted(tetra))
    rest = [x for x in vs if x != v]
    ordering = [v] + rest
    if permutation_sign(ordering) < 0:
        ordering[2], ordering[3] = ordering[3], ordering[2]
    return tuple(ordering)


def f3_apply(phi: Callable[[tuple], object], tetra: Sequence[int], v: int):
    """``psi_{v,a} = phi_{vjk} phi_{vkl} phi_{vlj}`` with (v, j, k, l) even."""
    _, j, k, l = even_ordering(tetra, v)
    return phi((v, j, k)) @ phi((v, k, l)) @ phi((v, l, j))


# differentials --------------------------------------------------------------


def _first_cols(m: ExactMatrix, column: int) -> ExactMatrix:
    return m.col(column)


def differential_f2(zeta: CoordinateAssignment, dz: Mapping[int, ExactMatrix],
                    faces: Iterable[Sequence[int]], column: int = 0, check: bool = True) -> dict:
    """Linearisation of F2 at ``z = zeta`` along the perturbation ``dz``.

    ``dz`` lists matrix perturbations of inner vertices (others stay fixed).
    Returns ``{face: n x 1 column}``. With ``check`` the epsilon part of F2
    on dual matrices is compared with the closed form
    ``zeta_ij^-1 (dz_i - dz_j) - zeta_ik^-1 (dz_i - dz_k)``.
    """
    n = zeta.n
    zero = ExactMatrix.zeros(n, n)
    z = {v: DualMatrix(m, dz.get(v, zero)) for v, m in zeta.zeta.items()}
    out = {}
    for face in faces:
        i, j, k = sorted(face)
        closed = (zeta.diff_inv(i, j) @ (dz.get(i, zero) - dz.get(j, zero))
                  - zeta.diff_inv(i, k) @ (dz.get(i, zero) - dz.get(k, zero)))
        if check:
            dual = f2_apply(z, zeta, (i, j, k))
            if dual.value != ExactMatrix.identity(n) or dual.differential != closed:
                raise ConsistencyError(f"F2 differential mismatch on face {(i, j, k)}")
        out[(i, j, k)] = _first_cols(closed, column)
    return out


def differential_f3(zeta: CoordinateAssignment, dphi: Mapping[tuple, ExactMatrix],
                    tetra: Sequence[int], column: int = 0, check: bool = True):
    """``(dpsi_{i1,a}, dpsi_{i2,a})`` for ascending ``a`` from face perturbations.

    ``dphi`` maps ascending face triples to ``n x n`` matrix perturbations of
    ``phi``. The closed form sums ``dphi_{v,b}`` over the faces around ``v``
    with non-canonical components resolved by the face relations; with
    ``check`` it is compared to the epsilon part of F3 on dual matrices.
    """
    from .chain import psi_face_coeffs

    n = zeta.n
    a = tuple(sorted(tetra))
    one = ExactMatrix.identity(n)
    zero = ExactMatrix.zeros(n, n)
    results = []
    for v in a[:2]:
        closed = zero
        for tr, coeff in psi_face_coeffs(zeta, a, v).items():
            closed = closed + coeff @ dphi.get(tr, zero)
        if check:
            dual_phi = {tr: DualMatrix(one, dphi.get(tr, zero)) for tr in _triples(a)}
            psi = f3_apply(lambda o: phi_permuted(dual_phi, zeta, o), a, v)
            if psi.value != one or psi.differential != closed:
                raise ConsistencyError(f"F3 differential mismatch at vertex {v} of {a}")
        results.append(_first_cols(closed, column))
    return tuple(results)


def _triples(a: Sequence[int]) -> list:
    return list(combinations(sorted(a), 3))
