"""Tetrahedron weights, pentagon equations, state sums, torsion and I_C."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .chain import (ChainComplexData, Coloring, build_complex, build_f3_full,
                    enumerate_colorings, tetra_block)
from .coords import CoordinateAssignment, random_coordinates
from .grassmann import (NESTED, SEQUENTIAL, GrassmannAlgebra, GrassmannElement,
                        berezin_multi, gen_fun, gen_fun_inner)
from .matrix import ExactMatrix, SingularMatrix, independent_rows
from .scalar import GaussianRational, format_scalar
from .triangulation import (FaceKey, MoveError, Tetra, Triangulation, face_label,
                            move_02, pachner_14, pachner_23, pachner_32, pachner_41)

__all__ = [
    "FaceVar",
    "InvariantValue",
    "PentagonReport",
    "Prefactor",
    "TorsionResult",
    "canonical_sign",
    "common_algebra",
    "face_generators",
    "gauge_transform",
    "invariant_IC",
    "invariant_table",
    "matrix_weight",
    "pentagon_clusters",
    "pillow_factor",
    "prefactor",
    "random_interior_moves",
    "scalar_weight",
    "state_sum_scalar",
    "tentative_invariant",
    "torsion",
    "verify_pentagon_matrix",
    "verify_pentagon_scalar",
]


class FaceVar(NamedTuple):
    """Grassmann generator for component ``comp`` of face ``face``."""

    face: FaceKey
    comp: int

    def name(self) -> str:
        return f"a_{face_label(self.face)}_{self.comp}"


def face_generators(faces: Sequence[FaceKey], n: int) -> list[FaceVar]:
    return [FaceVar(f, c) for f in faces for c in range(n)]


def _tetra_faces(tetra) -> tuple[tuple, dict]:
    """Sorted vertices and ``{triple: face key}`` for a Tetra or a bare 4-tuple."""
    if isinstance(tetra, Tetra):
        return tetra.vertices, dict(zip(tetra.face_triples(), tetra.faces()))
    vs = tuple(sorted(tetra))
    return vs, {tr: (tr, 0) for tr in Tetra(0, vs).face_triples()}


# weights ------------------------------------------------------------------


def scalar_weight(zeta: CoordinateAssignment, tetra, algebra: GrassmannAlgebra | None = None) -> GrassmannElement:
    """The six-term weight with one ``zeta`` per edge and the generators of
    the two faces adjacent to it.

    ``tetra`` is a vertex ordering (its orientation is respected) or a stored
    :class:`Tetra`, whose ascending order is used.
    """
    if isinstance(tetra, Tetra):
        order = tetra.vertices
        keys = dict(zip(tetra.face_triples(), tetra.faces()))
    else:
        order = tuple(tetra)
        keys = {tr: (tr, 0) for tr in Tetra(0, tuple(sorted(order))).face_triples()}
    if algebra is None:
        algebra = GrassmannAlgebra(face_generators(sorted(keys.values()), 1))
    z = {v: zeta.scalar(v) for v in order}

    def a(*vs):
        return algebra.gen(FaceVar(keys[tuple(sorted(vs))], 0))

    out = algebra.zero()
    i1, i2, i3, i4 = order
    terms = [
        (1, i1, i2, i3, i4), (-1, i1, i3, i2, i4), (1, i1, i4, i2, i3),
        (1, i2, i3, i1, i4), (-1, i2, i4, i1, i3), (1, i3, i4, i1, i2),
    ]
    for s, p, q, r, t in terms:
        d = z[p] - z[q]
        if d == 0:
            raise SingularMatrix(f"coincident coordinates on edge {p}{q}", simplex=(p, q))
        out = out + (s * d) * (a(p, q, r) * a(p, q, t))
    return out


def matrix_weight(zeta: CoordinateAssignment, tetra, algebra: GrassmannAlgebra | None = None) -> GrassmannElement:
    """Generating function of the single-tetrahedron ``f3full`` block."""
    vs, keys = _tetra_faces(tetra)
    gens = face_generators([keys[tr] for tr in sorted(keys)], zeta.n)
    return gen_fun(tetra_block(zeta, vs), gens, algebra)


def gauge_transform(zeta: CoordinateAssignment, tetra: Sequence[int]) -> ExactMatrix:
    """n = 1 block with columns scaled by ``z23, z24, z34, z34`` and the
    second row divided by ``-z34`` (indices relative to the sorted tetra)."""
    if zeta.n != 1:
        raise ValueError("the gauge reduction is defined for n = 1")
    i1, i2, i3, i4 = sorted(tetra)
    z = lambda i, j: zeta.scalar(i) - zeta.scalar(j)
    scales = [z(i2, i3), z(i2, i4), z(i3, i4), z(i3, i4)]
    m = tetra_block(zeta, (i1, i2, i3, i4)).to_rows()
    rows = [[x * s for x, s in zip(r, scales)] for r in m]
    rows[1] = [x / -z(i3, i4) for x in rows[1]]
    return ExactMatrix.from_rows(rows)


# prefactor and pentagons ---------------------------------------------------


@dataclass(frozen=True)
class Prefactor:
    faces: object
    edges: object
    tetras: object

    @property
    def value(self):
        return self.faces / (self.edges * self.tetras)

    def to_json(self) -> dict:
        return {"inner_faces": format_scalar(self.faces), "inner_edges": format_scalar(self.edges),
                "tetrahedra": format_scalar(self.tetras), "value": format_scalar(self.value)}


def prefactor(t: Triangulation, zeta: CoordinateAssignment) -> Prefactor:
    """Products of ``det zeta_{j2 j3}`` over inner faces, ``det zeta_{i1 i2}``
    over inner edges and ``det zeta_{k3 k4}`` over tetrahedra."""
    f = e = q = Fraction(1)
    for (j1, j2, j3), _ in t.inner_faces:
        f *= zeta.det_diff(j2, j3)
    for i1, i2 in t.inner_edges:
        e *= zeta.det_diff(i1, i2)
    for x in t.ordered:
        q *= zeta.det_diff(x.vertices[2], x.vertices[3])
    if e == 0 or q == 0:
        raise SingularMatrix("singular coordinate difference in the prefactor")
    return Prefactor(f, e, q)


def pentagon_clusters() -> tuple[Triangulation, Triangulation]:
    """The coherently oriented two- and three-tetrahedron clusters on 1..5."""
    lhs = Triangulation.from_tuples([(1, 2, 3, 4), (1, 3, 2, 5)])
    return lhs, pachner_23(lhs, (1, 2))


@dataclass
class PentagonReport:
    identity: str
    n: int
    equal: bool
    lhs: GrassmannElement
    rhs: GrassmannElement
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"identity": self.identity, "n": self.n, "seed": self.seed, "equal": self.equal,
               "lhs_terms": len(self.lhs), "rhs_terms": len(self.rhs)}
        out.update(self.extra)
        return out


def _as_coords(zeta, n: int = 1) -> CoordinateAssignment:
    if isinstance(zeta, CoordinateAssignment):
        return zeta
    return CoordinateAssignment.scalars(zeta)


def verify_pentagon_scalar(zeta, convention: str = SEQUENTIAL) -> PentagonReport:
    """Both sides of the scalar pentagon for ``zeta_1..zeta_5``."""
    zeta = _as_coords(zeta)
    lhs_t, rhs_t = pentagon_clusters()
    algebra = GrassmannAlgebra(face_generators(sorted(set(lhs_t.faces) | set(rhs_t.faces)), 1))
    left = scalar_weight(zeta, (1, 2, 3, 4), algebra) * scalar_weight(zeta, (1, 2, 3, 5), algebra)
    lhs = berezin_multi(left, [FaceVar(((1, 2, 3), 0), 0)], convention)
    right = (scalar_weight(zeta, (1, 2, 4, 5), algebra) * scalar_weight(zeta, (2, 3, 4, 5), algebra)
             * scalar_weight(zeta, (1, 3, 4, 5), algebra))
    inner = [FaceVar((tr, 0), 0) for tr in ((1, 4, 5), (2, 4, 5), (3, 4, 5))]
    rhs = berezin_multi(right, inner, convention) / (zeta.scalar(4) - zeta.scalar(5))
    return PentagonReport("pentagon-scalar", 1, lhs == rhs, lhs, rhs)


def _generating_function(t: Triangulation, zeta: CoordinateAssignment, algebra: GrassmannAlgebra,
                         route: str = "minors") -> GrassmannElement:
    """Integral over all inner-face components of the product of matrix
    weights. ``minors`` enumerates minors of ``f3full``; ``product``
    multiplies the weights and integrates (nested convention)."""
    gens = face_generators(t.faces, zeta.n)
    inner = face_generators(t.inner_faces, zeta.n)
    if route == "minors":
        return gen_fun_inner(build_f3_full(t, zeta), gens, inner, algebra)
    if route != "product":
        raise ValueError(f"unknown route {route!r}")
    acc = algebra.one()
    for x in t.ordered:
        acc = acc * matrix_weight(zeta, x, algebra)
    return berezin_multi(acc, inner, NESTED)


def verify_pentagon_matrix(zeta: CoordinateAssignment, route: str = "minors") -> PentagonReport:
    """Both sides of the matrix pentagon, each scaled by its prefactor."""
    lhs_t, rhs_t = pentagon_clusters()
    algebra = GrassmannAlgebra(face_generators(sorted(set(lhs_t.faces) | set(rhs_t.faces)), zeta.n))
    lhs = _generating_function(lhs_t, zeta, algebra, route) * prefactor(lhs_t, zeta).value
    rhs = _generating_function(rhs_t, zeta, algebra, route) * prefactor(rhs_t, zeta).value
    return PentagonReport("pentagon-matrix", zeta.n, lhs == rhs, lhs, rhs)


# state sums ---------------------------------------------------------------


def _boundary_algebra(t: Triangulation, n: int) -> GrassmannAlgebra:
    return GrassmannAlgebra(face_generators(t.faces, n), max_generators=max(64, len(t.faces) * n))


def common_algebra(triangulations: Sequence[Triangulation], n: int) -> GrassmannAlgebra:
    """One generator table covering the faces of every given complex."""
    faces = sorted({f for t in triangulations for f in t.faces})
    return GrassmannAlgebra(face_generators(faces, n), max_generators=max(64, len(faces) * n))


def state_sum_scalar(t: Triangulation, zeta: CoordinateAssignment,
                     convention: str = SEQUENTIAL, algebra: GrassmannAlgebra | None = None) -> GrassmannElement:
    """Scalar weights multiplied in canonical tetrahedron order, integrated
    over inner faces in face order, divided by the inner-edge ``zeta``.

    Pass a common ``algebra`` to compare results of different complexes.
    """
    if zeta.n != 1:
        raise ValueError("the scalar state sum needs n = 1")
    algebra = algebra or _boundary_algebra(t, 1)
    acc = algebra.one()
    for x in t.ordered:
        acc = acc * scalar_weight(zeta, x, algebra)
    out = berezin_multi(acc, face_generators(t.inner_faces, 1), convention)
    for i, j in t.inner_edges:
        out = out / (zeta.scalar(i) - zeta.scalar(j))
    return out


def tentative_invariant(t: Triangulation, zeta: CoordinateAssignment, route: str = "minors",
                        algebra: GrassmannAlgebra | None = None) -> GrassmannElement:
    algebra = algebra or _boundary_algebra(t, zeta.n)
    return _generating_function(t, zeta, algebra, route) * prefactor(t, zeta).value


# torsion ------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionResult:
    value: object
    rows_f2: tuple = ()
    rows_f3: tuple = ()
    minors: tuple = (1, 1, 1)
    convention: str = "greedy-ascending"

    @property
    def nondegenerate(self) -> bool:
        return self.value != 0


def _complement(k: int, chosen) -> list[int]:
    s = set(chosen)
    return [i for i in range(k) if i not in s]


def torsion(data: ChainComplexData) -> TorsionResult:
    """``minor f3 / (minor f2 minor f4)`` along a greedy tau-chain.

    Rows of ``f2`` are chosen as the first independent ones; ``f3`` is
    restricted to the complementary columns and again reduced to its first
    independent rows; ``f4`` then takes the columns left over. For an acyclic
    complex every such choice is nondegenerate; otherwise no chain exists
    and the result is 0.
    """
    d1, d2, d3, d4 = data.dims
    zero = TorsionResult(Fraction(0))
    if d2 != d3 or d1 != d4:
        return zero
    r2 = independent_rows(data.f2) if d1 else []
    if len(r2) != d1:
        return zero
    m2 = data.f2.submatrix(r2, range(d1)).det() if d1 else Fraction(1)
    cols3 = _complement(d2, r2)
    sub3 = data.f3.submatrix(range(d3), cols3)
    r3 = independent_rows(sub3) if cols3 else []
    if len(r3) != d2 - d1:
        return zero
    m3 = sub3.submatrix(r3, range(len(cols3))).det() if r3 else Fraction(1)
    cols4 = _complement(d3, r3)
    m4 = data.f4.submatrix(range(d4), cols4).det() if d4 else Fraction(1)
    if m4 == 0:
        return zero
    return TorsionResult(m3 / (m2 * m4), tuple(r2), tuple(r3), (m2, m3, m4))


def canonical_sign(x):
    """``|x|`` for rationals; for Gaussian rationals the sign that makes the
    first nonzero of (re, im) positive."""
    if isinstance(x, GaussianRational):
        lead = x.re if x.re != 0 else x.im
        return -x if lead < 0 else x
    return -x if x < 0 else x


@dataclass(frozen=True)
class InvariantValue:
    value: object
    raw: object
    coloring: Coloring
    tau: TorsionResult
    prefactor: Prefactor

    def to_json(self) -> dict:
        return {
            "coloring": self.coloring.labels(),
            "value": format_scalar(self.value),
            "tau": format_scalar(self.tau.value),
            "prefactor": format_scalar(self.prefactor.value),
            "prefactor_parts": self.prefactor.to_json(),
        }


def invariant_IC(t: Triangulation, zeta: CoordinateAssignment, coloring: Coloring,
                 data: ChainComplexData | None = None) -> InvariantValue:
    if data is None:
        data = build_complex(t, zeta, coloring)
    tau = torsion(data)
    pre = prefactor(t, zeta)
    raw = pre.value * tau.value
    return InvariantValue(canonical_sign(raw), raw, coloring, tau, pre)


def invariant_table(t: Triangulation, zeta: CoordinateAssignment,
                    colorings: Sequence[Coloring] | None = None) -> list[InvariantValue]:
    if colorings is None:
        colorings = enumerate_colorings(t, zeta.n)
    return [invariant_IC(t, zeta, c) for c in colorings]


def pillow_factor(zeta: CoordinateAssignment, face: Sequence[int], new_vertex: int):
    """Expected ``|tau|`` ratio across a 0->2 move on face ``i<j<k`` with new
    vertex ``v``: ``det zeta_iv det zeta_kv / det zeta_jk``."""
    i, j, k = sorted(face)
    v = new_vertex
    return zeta.det_diff(i, v) * zeta.det_diff(k, v) / zeta.det_diff(j, k)


# random interior moves ----------------------------------------------------


def _candidates_23(t: Triangulation) -> list:
    out = []
    for key in t.inner_faces:
        a, b = t.face_incidence[key]
        A, B = t.by_id[a], t.by_id[b]
        if len(set(A.faces()) & set(B.faces())) != 1:
            continue
        (p,) = set(A.vertices) - set(key[0])
        (q,) = set(B.vertices) - set(key[0])
        if p != q and tuple(sorted((p, q))) not in t.edges:
            out.append((a, b))
    return out


def _candidates_32(t: Triangulation) -> list:
    out = []
    for e in t.inner_edges:
        try:
            pachner_32(t, e)
        except MoveError:
            continue
        out.append(e)
    return out


def random_interior_moves(t: Triangulation, zeta: CoordinateAssignment, steps: int,
                          rng: random.Random | int = 0, kinds: Sequence[str] = ("2-3", "3-2", "0-2+2-3"),
                          bound: int = 100):
    """Apply ``steps`` random applicable interior moves.

    Returns ``(history, zeta)`` where ``history`` lists ``(label, triangulation)``
    pairs starting with the input and ``zeta`` covers every vertex ever
    created. Move kinds: ``2-3``, ``3-2``, ``1-4``, ``4-1`` and the composite
    ``0-2+2-3`` (a pillow followed by a 2-3 move through it).
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    history = [("start", t)]
    for _ in range(steps):
        options = []
        for kind in kinds:
            if kind == "2-3":
                options += [("2-3", c) for c in _candidates_23(t)]
            elif kind == "3-2":
                options += [("3-2", c) for c in _candidates_32(t)]
            elif kind == "1-4":
                options += [("1-4", x.id) for x in t.ordered]
            elif kind == "4-1":
                options += [("4-1", v) for v in t.inner_vertices if len(t.tetras_with(v)) == 4]
            elif kind == "0-2+2-3":
                options += [("0-2+2-3", f) for f in t.inner_faces]
            else:
                raise ValueError(f"unknown move kind {kind!r}")
        if not options:
            break
        kind, arg = options[rng.randrange(len(options))]
        if kind == "2-3":
            t = pachner_23(t, arg)
            label = f"2-3 T{arg[0]},T{arg[1]}"
        elif kind == "3-2":
            t = pachner_32(t, arg)
            label = f"3-2 edge {arg[0]}-{arg[1]}"
        elif kind == "1-4":
            w = t.next_vertex_label()
            zeta = random_coordinates([w], zeta.n, rng, bound, fixed=zeta)
            t = pachner_14(t, arg, w)
            label = f"1-4 T{arg} +{w}"
        elif kind == "4-1":
            t = pachner_41(t, arg)
            label = f"4-1 vertex {arg}"
        else:
            w = t.next_vertex_label()
            zeta = random_coordinates([w], zeta.n, rng, bound, fixed=zeta)
            owner = t.face_incidence[arg][0]
            t = move_02(t, arg, w)
            pillow = [x.id for x in t.tetrahedra if w in x.vertices and arg in x.faces()]
            t = pachner_23(t, (owner, pillow[0]))
            label = f"0-2+2-3 {face_label(arg)} +{w}"
        history.append((label, t))
    return history, zeta
