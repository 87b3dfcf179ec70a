"""The algebraic complex ``C1 -f2-> C2 -f3-> C3 -f4-> C4`` of a triangulation.

Bases (all block components ``0..n-1`` innermost):

* ``C1``, ``C4``: inner vertices, ascending.
* face space (``f3full`` columns): every face key in lexicographic order.
* ``C2``: inner faces plus the coloring, in face order.
* ``C3``: two blocks ``dpsi_{i1,a}``, ``dpsi_{i2,a}`` per tetrahedron ``a`` in
  canonical order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .coords import CoordinateAssignment, even_ordering
from .grassmann import permutation_sign
from .matrix import ExactMatrix, nullspace, solve
from .triangulation import FaceKey, Tetra, Triangulation, face_label

__all__ = [
    "ChainComplexData",
    "Coloring",
    "boundary_condition_matrix",
    "boundary_column_relations",
    "boundary_conditions_rank",
    "boundary_kernel_dimension",
    "build_complex",
    "build_f2",
    "build_f2_full",
    "build_f3",
    "build_f3_full",
    "build_f4",
    "enumerate_colorings",
    "phi_coeff",
    "phi_solve",
    "psi_coeffs",
    "psi_face_coeffs",
    "psi_solve",
    "tetra_block",
    "verify_complex",
]


# relation solvers ----------------------------------------------------------


def phi_solve(zeta: CoordinateAssignment, b: Sequence[int], dphi_i: ExactMatrix):
    """Given ``dphi_{i,b}`` for ``b = (i, j, k)``, return ``(dphi_{j,b}, dphi_{k,b})``.

    Solves ``dphi_i + dphi_j + dphi_k = 0`` and
    ``zeta_i dphi_i + zeta_j dphi_j + zeta_k dphi_k = 0``.
    """
    i, j, k = b
    dj = -(zeta.diff_inv(j, k) @ zeta.diff(i, k) @ dphi_i)
    dk = -(zeta.diff_inv(k, j) @ zeta.diff(i, j) @ dphi_i)
    return dj, dk


def phi_coeff(zeta: CoordinateAssignment, v: int, b: Sequence[int]) -> ExactMatrix:
    """Matrix ``K`` with ``dphi_{v,b} = K dphi_{sorted(b)}`` for any ordering ``b``."""
    i, j, k = sorted(b)
    s = permutation_sign(b)
    if v == i:
        K = zeta.identity()
    elif v == j:
        K = -(zeta.diff_inv(j, k) @ zeta.diff(i, k))
    elif v == k:
        K = -(zeta.diff_inv(k, j) @ zeta.diff(i, j))
    else:
        raise ValueError(f"vertex {v} not in face {tuple(b)}")
    return K if s > 0 else -K


def psi_solve(zeta: CoordinateAssignment, a: Sequence[int], dpsi_i: ExactMatrix, dpsi_j: ExactMatrix):
    """Given ``dpsi_{i,a}``, ``dpsi_{j,a}`` for ``a = (i, j, k, l)``, return
    ``(dpsi_{k,a}, dpsi_{l,a})`` from the two tetrahedron relations."""
    i, j, k, l = a
    s = dpsi_i + dpsi_j
    t = zeta[i] @ dpsi_i + zeta[j] @ dpsi_j
    dk = zeta.diff_inv(k, l) @ (zeta[l] @ s - t)
    dl = zeta.diff_inv(l, k) @ (zeta[k] @ s - t)
    return dk, dl


def psi_coeffs(zeta: CoordinateAssignment, v: int, a: Sequence[int]) -> tuple[ExactMatrix, ExactMatrix]:
    """``(K1, K2)`` with ``dpsi_{v,a} = K1 dpsi_{a1} + K2 dpsi_{a2}`` where
    ``a1 < a2`` are the two smallest vertices; ``a`` may be in any order."""
    a1, a2, a3, a4 = sorted(a)
    s = permutation_sign(a)
    one, zero = zeta.identity(), ExactMatrix.zeros(zeta.n, zeta.n)
    if v == a1:
        K = (one, zero)
    elif v == a2:
        K = (zero, one)
    elif v == a3:
        inv = zeta.diff_inv(a3, a4)
        K = (inv @ zeta.diff(a4, a1), inv @ zeta.diff(a4, a2))
    elif v == a4:
        inv = zeta.diff_inv(a4, a3)
        K = (inv @ zeta.diff(a3, a1), inv @ zeta.diff(a3, a2))
    else:
        raise ValueError(f"vertex {v} not in tetrahedron {tuple(a)}")
    return K if s > 0 else (-K[0], -K[1])


def psi_face_coeffs(zeta: CoordinateAssignment, a: Sequence[int], v: int) -> dict:
    """``dpsi_{v,a}`` as ``{face triple: K}`` acting on ``dphi_{face}``,
    summing ``dphi_{v,b}`` over the three faces around ``v``."""
    _, j, k, l = even_ordering(a, v)
    out: dict = {}
    for b in ((v, j, k), (v, k, l), (v, l, j)):
        tr = tuple(sorted(b))
        out[tr] = out.get(tr, ExactMatrix.zeros(zeta.n, zeta.n)) + phi_coeff(zeta, v, b)
    return out


def tetra_block(zeta: CoordinateAssignment, a: Sequence[int]) -> ExactMatrix:
    """The ``2n x 4n`` matrix of ``f3`` for a lone tetrahedron.

    Block rows ``dpsi_{a1}``, ``dpsi_{a2}``; block columns the faces
    ``a1a2a3, a1a2a4, a1a3a4, a2a3a4``.
    """
    vs = tuple(sorted(a))
    triples = list(combinations(vs, 3))
    zero = ExactMatrix.zeros(zeta.n, zeta.n)
    rows = []
    for v in vs[:2]:
        coeffs = psi_face_coeffs(zeta, vs, v)
        rows.append([coeffs.get(tr, zero) for tr in triples])
    return ExactMatrix.block(rows)


# colorings ----------------------------------------------------------------


@dataclass(frozen=True)
class Coloring:
    """A set of ``(boundary face key, component)`` pairs."""

    members: tuple

    def __init__(self, members: Iterable):
        object.__setattr__(self, "members", tuple(sorted(set(_norm_member(m) for m in members))))

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, item) -> bool:
        return _norm_member(item) in set(self.members)

    def labels(self) -> list[str]:
        return [f"{face_label(f)}:{c}" for f, c in self.members]

    @classmethod
    def parse(cls, text: str) -> "Coloring":
        """Parse ``"123:0,124:1"``; labels >= 10 use dots (``1.2.10:0``),
        face copies a ``#c`` suffix."""
        members = []
        for tok in filter(None, (x.strip() for x in text.split(","))):
            face, _, comp = tok.partition(":")
            face, _, copy = face.partition("#")
            if "." in face:
                verts = tuple(int(x) for x in face.split("."))
            else:
                verts = tuple(int(ch) for ch in face)
            if len(verts) != 3:
                raise ValueError(f"bad face token {tok!r}")
            members.append(((tuple(sorted(verts)), int(copy or 0)), int(comp or 0)))
        return cls(members)

    def validate(self, t: Triangulation, n: int) -> None:
        need = n * (2 * len(t.tetrahedra) - len(t.inner_faces))
        if len(self.members) != need:
            raise ValueError(f"coloring has {len(self.members)} members, need n(2N3 - N'2) = {need}")
        bf = set(t.boundary_faces)
        for f, c in self.members:
            if f not in bf:
                raise ValueError(f"coloring member {face_label(f)} is not a boundary face")
            if not 0 <= c < n:
                raise ValueError(f"component {c} out of range for n = {n}")


def _norm_member(m):
    face, comp = m
    if isinstance(face[0], tuple):
        return ((tuple(sorted(face[0])), face[1]), comp)
    return ((tuple(sorted(face)), 0), comp)


def enumerate_colorings(t: Triangulation, n: int) -> list[Coloring]:
    size = n * (2 * len(t.tetrahedra) - len(t.inner_faces))
    pool = [(f, c) for f in t.boundary_faces for c in range(n)]
    if size < 0 or size > len(pool):
        return []
    return [Coloring(m) for m in combinations(pool, size)]


# matrices -----------------------------------------------------------------


def _block_matrix(row_keys, col_keys, blocks: dict, n: int) -> ExactMatrix:
    """Dense matrix from ``{(row_key, col_key): n x n block}``."""
    ri = {k: i for i, k in enumerate(row_keys)}
    ci = {k: i for i, k in enumerate(col_keys)}
    R, C = len(row_keys) * n, len(col_keys) * n
    grid = [[0] * C for _ in range(R)]
    for (rk, ck), blk in blocks.items():
        r0, c0 = ri[rk] * n, ci[ck] * n
        for a in range(n):
            for b in range(n):
                x = blk[a, b]
                if x:
                    grid[r0 + a][c0 + b] += x
    return ExactMatrix(R, C, [x for r in grid for x in r])


def _add(blocks: dict, key, m: ExactMatrix):
    blocks[key] = blocks[key] + m if key in blocks else m


def _expand(keys, n: int) -> tuple:
    return tuple((k, c) for k in keys for c in range(n))


def build_f2_full(t: Triangulation, zeta: CoordinateAssignment) -> ExactMatrix:
    """All face components from inner-vertex ``dz``; boundary ``dz`` are zero."""
    inner = set(t.inner_vertices)
    blocks: dict = {}
    for key in t.faces:
        i, j, k = key[0]
        a, b = zeta.diff_inv(i, j), zeta.diff_inv(i, k)
        if i in inner:
            _add(blocks, (key, i), a - b)
        if j in inner:
            _add(blocks, (key, j), -a)
        if k in inner:
            _add(blocks, (key, k), b)
    return _block_matrix(t.faces, t.inner_vertices, blocks, zeta.n)


def build_f3_full(t: Triangulation, zeta: CoordinateAssignment) -> ExactMatrix:
    """``dpsi`` rows for every tetrahedron against every face component."""
    blocks: dict = {}
    row_keys = []
    for x in t.ordered:
        for v in x.vertices[:2]:
            row_keys.append((x.id, v))
            for tr, K in psi_face_coeffs(zeta, x.vertices, v).items():
                _add(blocks, ((x.id, v), x.face_key(tr)), K)
    return _block_matrix(row_keys, t.faces, blocks, zeta.n)


def _c2_keys(t: Triangulation, coloring: Coloring, n: int) -> tuple:
    inner = set(t.inner_faces)
    chosen = set(coloring.members)
    return tuple(fc for fc in _expand(t.faces, n) if fc[0] in inner or fc in chosen)


def build_f2(t: Triangulation, zeta: CoordinateAssignment, coloring: Coloring) -> ExactMatrix:
    full = build_f2_full(t, zeta)
    rows = _positions(_expand(t.faces, zeta.n), _c2_keys(t, coloring, zeta.n))
    return full.submatrix(rows, range(full.cols))


def build_f3(t: Triangulation, zeta: CoordinateAssignment, coloring: Coloring,
             full: ExactMatrix | None = None) -> ExactMatrix:
    coloring.validate(t, zeta.n)
    if full is None:
        full = build_f3_full(t, zeta)
    cols = _positions(_expand(t.faces, zeta.n), _c2_keys(t, coloring, zeta.n))
    return full.submatrix(range(full.rows), cols)


def build_f4(t: Triangulation, zeta: CoordinateAssignment) -> ExactMatrix:
    """``dchi_v = sum_a orientation(a) dpsi_{v, sorted a}`` over inner vertices."""
    blocks: dict = {}
    col_keys = [(x.id, v) for x in t.ordered for v in x.vertices[:2]]
    for v in t.inner_vertices:
        for x in t.ordered:
            if v not in x.vertices:
                continue
            K1, K2 = psi_coeffs(zeta, v, x.vertices)
            if x.orientation < 0:
                K1, K2 = -K1, -K2
            _add(blocks, (v, (x.id, x.vertices[0])), K1)
            _add(blocks, (v, (x.id, x.vertices[1])), K2)
    return _block_matrix(t.inner_vertices, col_keys, blocks, zeta.n)


def _positions(all_keys, subset) -> list:
    idx = {k: i for i, k in enumerate(all_keys)}
    return [idx[k] for k in subset]


@dataclass(frozen=True)
class ChainComplexData:
    n: int
    coloring: Coloring
    f2: ExactMatrix
    f3: ExactMatrix
    f4: ExactMatrix
    f2_full: ExactMatrix
    f3_full: ExactMatrix
    z_labels: tuple
    face_labels: tuple
    c2_labels: tuple
    psi_labels: tuple
    chi_labels: tuple
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (len(self.z_labels), len(self.c2_labels), len(self.psi_labels), len(self.chi_labels))

    def to_json(self) -> dict:
        def lab(items, fmt):
            return [fmt(x) for x in items]

        face = lambda fc: f"dphi_{face_label(fc[0])}[{fc[1]}]"
        return {
            "n": self.n,
            "coloring": self.coloring.labels(),
            "dims": list(self.dims),
            "labels": {
                "C1": lab(self.z_labels, lambda x: f"dz_{x[0]}[{x[1]}]"),
                "faces": lab(self.face_labels, face),
                "C2": lab(self.c2_labels, face),
                "C3": lab(self.psi_labels, lambda x: f"dpsi_{x[0][1]},T{x[0][0]}[{x[1]}]"),
                "C4": lab(self.chi_labels, lambda x: f"dchi_{x[0]}[{x[1]}]"),
            },
            "f2": self.f2.to_json(),
            "f3": self.f3.to_json(),
            "f4": self.f4.to_json(),
            "f3_full": self.f3_full.to_json(),
        }


def build_complex(t: Triangulation, zeta: CoordinateAssignment, coloring: Coloring) -> ChainComplexData:
    n = zeta.n
    coloring.validate(t, n)
    f2_full = build_f2_full(t, zeta)
    f3_full = build_f3_full(t, zeta)
    c2 = _c2_keys(t, coloring, n)
    pos = _positions(_expand(t.faces, n), c2)
    psi_keys = [(x.id, v) for x in t.ordered for v in x.vertices[:2]]
    return ChainComplexData(
        n=n,
        coloring=coloring,
        f2=f2_full.submatrix(pos, range(f2_full.cols)),
        f3=f3_full.submatrix(range(f3_full.rows), pos),
        f4=build_f4(t, zeta),
        f2_full=f2_full,
        f3_full=f3_full,
        z_labels=_expand(t.inner_vertices, n),
        face_labels=_expand(t.faces, n),
        c2_labels=c2,
        psi_labels=_expand(psi_keys, n),
        chi_labels=_expand(t.inner_vertices, n),
    )


def verify_complex(data: ChainComplexData) -> dict:
    """Exact checks of ``f3 f2 = 0`` and ``f4 f3 = 0`` plus acyclicity ranks."""
    d1, d2, d3, d4 = data.dims
    f3f2 = data.f3 @ data.f2
    f4f3 = data.f4 @ data.f3
    full_f3f2 = data.f3_full @ data.f2_full
    full_f4f3 = data.f4 @ data.f3_full
    r2 = data.f2.rank() if data.f2.rows and data.f2.cols else 0
    r3 = data.f3.rank()
    r4 = data.f4.rank() if data.f4.rows and data.f4.cols else 0
    acyclic = r2 == d1 and r2 + r3 == d2 and r3 + r4 == d3 and r4 == d4
    return {
        "dims": [d1, d2, d3, d4],
        "f3f2_zero": f3f2.is_zero(),
        "f4f3_zero": f4f3.is_zero(),
        "f3full_f2full_zero": full_f3f2.is_zero(),
        "f4_f3full_zero": full_f4f3.is_zero(),
        "ranks": [r2, r3, r4],
        "acyclic": acyclic,
        "ok": f3f2.is_zero() and f4f3.is_zero(),
    }


# boundary conditions -------------------------------------------------------


def boundary_condition_matrix(t: Triangulation, zeta: CoordinateAssignment) -> ExactMatrix:
    """For every boundary vertex ``v``: the sum of ``dphi_{v,b}`` over the
    boundary faces ``b`` around ``v``, each taken with its induced boundary
    orientation; columns are boundary face components."""
    blocks: dict = {}
    for key in t.boundary_faces:
        (owner,) = t.face_incidence[key]
        sigma = t.by_id[owner].induced_sign(key[0])
        for v in key[0]:
            K = phi_coeff(zeta, v, key[0])
            _add(blocks, (v, key), K if sigma > 0 else -K)
    return _block_matrix(t.boundary_vertices, t.boundary_faces, blocks, zeta.n)


def boundary_conditions_rank(t: Triangulation, zeta: CoordinateAssignment) -> int:
    return boundary_condition_matrix(t, zeta).rank()


def boundary_kernel_dimension(t: Triangulation, zeta: CoordinateAssignment) -> int:
    """Dimension of the boundary ``dphi`` that extend to a kernel vector of
    ``f3full`` (i.e. the kernel projected onto the boundary components)."""
    full = build_f3_full(t, zeta)
    ker = nullspace(full)
    if ker.cols == 0:
        return 0
    bset = set(t.boundary_faces)
    rows = [i for i, (f, _) in enumerate(_expand(t.faces, zeta.n)) if f in bset]
    return ker.submatrix(rows, range(ker.cols)).rank()


def face_columns(t: Triangulation, n: int, faces: Iterable[FaceKey]) -> list[int]:
    return _positions(_expand(t.faces, n), _expand(list(faces), n))


def boundary_column_relations(t: Triangulation, zeta: CoordinateAssignment,
                              basis: Sequence[tuple]) -> dict:
    """Express every boundary column of ``f3full`` through the ``basis``
    boundary columns modulo the inner columns.

    ``basis`` lists ``(face key, component)`` pairs. Returns
    ``{(face key, component): coefficients over basis}``; raises
    ``ValueError`` if the inner plus basis columns are not independent or a
    column is not in their span.
    """
    n = zeta.n
    full = build_f3_full(t, zeta)
    keys = _expand(t.faces, n)
    inner = set(t.inner_faces)
    inner_cols = [i for i, (f, _) in enumerate(keys) if f in inner]
    basis_cols = _positions(keys, basis)
    span = full.submatrix(range(full.rows), inner_cols + basis_cols)
    if span.rank() != span.cols:
        raise ValueError("inner and basis columns are not independent")
    out = {}
    for i, (f, c) in enumerate(keys):
        if f in inner:
            continue
        try:
            x = solve(span, full.submatrix(range(full.rows), [i]))
        except ValueError:
            raise ValueError(f"column {face_label(f)}:{c} is not in the span") from None
        out[(f, c)] = tuple(x[len(inner_cols) + k, 0] for k in range(len(basis_cols)))
    return out
