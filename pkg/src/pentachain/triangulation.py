"""Triangulated oriented 3-manifolds with boundary and their local moves.

Tetrahedra are stored with ascending vertex tuples plus an orientation sign
relative to that order. Faces are identified by ``(vertex triple, copy)``
so that the 0->2 "pillow" move, which produces two distinct faces on the same
three vertices, stays representable. All moves return new values.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .grassmann import permutation_sign

__all__ = [
    "FaceKey",
    "MoveError",
    "SimplexStats",
    "Tetra",
    "Triangulation",
    "TriangulationError",
    "classify",
    "move_02",
    "pachner_14",
    "pachner_23",
    "pachner_32",
    "pachner_41",
    "positive_ordering",
    "same_complex",
    "validate",
]

FaceKey = tuple  # ((i, j, k), copy) with i < j < k
Triple = tuple


class TriangulationError(ValueError):
    """The complex violates a manifold/orientation invariant."""


class MoveError(ValueError):
    """A move was requested where it is not applicable."""


def face_label(key: FaceKey) -> str:
    triple, copy = key
    sep = "" if all(v < 10 for v in triple) else "."
    base = sep.join(str(v) for v in triple)
    return base if copy == 0 else f"{base}#{copy}"


@dataclass(frozen=True)
class Tetra:
    id: int
    vertices: tuple
    orientation: int = 1
    face_copies: tuple = (0, 0, 0, 0)

    def __post_init__(self):
        vs = tuple(self.vertices)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "face_copies", tuple(self.face_copies))

    @classmethod
    def from_ordering(cls, id: int, ordering: Sequence[int], face_copies=None) -> "Tetra":
        """Tetrahedron whose positive orientation is ``ordering``."""
        vs = tuple(sorted(ordering))
        t = cls(id, vs, permutation_sign(ordering) if len(set(ordering)) == 4 else 1)
        if face_copies is not None:
            t = replace(t, face_copies=tuple(face_copies[tr] for tr in t.face_triples()))
        return t

    def face_triples(self) -> tuple:
        """Faces in lexicographic order: opposite vertex 3, 2, 1, 0."""
        a, b, c, d = self.vertices
        return ((a, b, c), (a, b, d), (a, c, d), (b, c, d))

    def faces(self) -> tuple:
        return tuple(zip(self.face_triples(), self.face_copies))

    def face_key(self, triple: Iterable[int]) -> FaceKey:
        tr = tuple(sorted(triple))
        for t, c in zip(self.face_triples(), self.face_copies):
            if t == tr:
                return (t, c)
        raise KeyError(f"tetrahedron {self.id} has no face {tr}")

    def opposite_position(self, triple: Iterable[int]) -> int:
        (missing,) = set(self.vertices) - set(triple)
        return self.vertices.index(missing)

    def induced_sign(self, triple: Iterable[int]) -> int:
        """Boundary orientation induced on a face, relative to its sorted order."""
        return self.orientation * (-1) ** self.opposite_position(triple)

    def edges(self) -> tuple:
        return tuple(combinations(self.vertices, 2))

    def is_positive(self, ordering: Sequence[int]) -> bool:
        return permutation_sign(ordering) == self.orientation


def positive_ordering(t: Tetra, first: Sequence[int] = ()) -> tuple:
    """A positively oriented ordering of ``t`` starting with ``first``
    (if ``first`` has fewer than 3 entries the rest follow ascending)."""
    rest = [v for v in t.vertices if v not in first]
    ordering = list(first) + rest
    if not t.is_positive(ordering):
        if len(rest) < 2:
            raise ValueError("cannot fix orientation with three vertices pinned")
        ordering[-1], ordering[-2] = ordering[-2], ordering[-1]
    return tuple(ordering)


@dataclass(frozen=True)
class SimplexStats:
    N: tuple
    N_inner: tuple
    inner_vertices: tuple
    inner_edges: tuple
    inner_faces: tuple
    boundary_faces: tuple


@dataclass(frozen=True)
class Triangulation:
    tetrahedra: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "tetrahedra", tuple(self.tetrahedra))

    @classmethod
    def from_tuples(cls, tuples: Iterable[Sequence[int]]) -> "Triangulation":
        """Tetrahedra given as positively oriented vertex orderings."""
        return cls(tuple(Tetra.from_ordering(i + 1, t) for i, t in enumerate(tuples)))

    # derived data -------------------------------------------------------

    @cached_property
    def by_id(self) -> dict:
        return {t.id: t for t in self.tetrahedra}

    @cached_property
    def ordered(self) -> tuple:
        """Canonical tetrahedron order: sorted vertex tuple, then id."""
        return tuple(sorted(self.tetrahedra, key=lambda t: (t.vertices, t.id)))

    @cached_property
    def vertices(self) -> tuple:
        return tuple(sorted({v for t in self.tetrahedra for v in t.vertices}))

    @cached_property
    def face_incidence(self) -> dict:
        inc = defaultdict(list)
        for t in self.tetrahedra:
            for key in t.faces():
                inc[key].append(t.id)
        return dict(inc)

    @cached_property
    def faces(self) -> tuple:
        return tuple(sorted(self.face_incidence))

    @cached_property
    def boundary_faces(self) -> tuple:
        return tuple(f for f in self.faces if len(self.face_incidence[f]) == 1)

    @cached_property
    def inner_faces(self) -> tuple:
        return tuple(f for f in self.faces if len(self.face_incidence[f]) >= 2)

    @cached_property
    def edges(self) -> tuple:
        return tuple(sorted({e for t in self.tetrahedra for e in t.edges()}))

    @cached_property
    def boundary_edges(self) -> frozenset:
        return frozenset(e for (tr, _) in self.boundary_faces for e in combinations(tr, 2))

    @cached_property
    def inner_edges(self) -> tuple:
        return tuple(e for e in self.edges if e not in self.boundary_edges)

    @cached_property
    def boundary_vertices(self) -> tuple:
        return tuple(sorted({v for (tr, _) in self.boundary_faces for v in tr}))

    @cached_property
    def inner_vertices(self) -> tuple:
        bv = set(self.boundary_vertices)
        return tuple(v for v in self.vertices if v not in bv)

    def tetras_with(self, *verts: int) -> list:
        return [t for t in self.ordered if set(verts) <= set(t.vertices)]

    def next_vertex_label(self) -> int:
        return max(self.vertices, default=0) + 1

    def _next_ids(self, k: int) -> list:
        start = max((t.id for t in self.tetrahedra), default=0) + 1
        return list(range(start, start + k))

    def stats(self) -> SimplexStats:
        return classify(self)


def classify(t: Triangulation) -> SimplexStats:
    problems = validate(t)
    if problems:
        raise TriangulationError("; ".join(problems))
    return SimplexStats(
        N=(len(t.vertices), len(t.edges), len(t.faces), len(t.tetrahedra)),
        N_inner=(len(t.inner_vertices), len(t.inner_edges), len(t.inner_faces), len(t.tetrahedra)),
        inner_vertices=t.inner_vertices,
        inner_edges=t.inner_edges,
        inner_faces=t.inner_faces,
        boundary_faces=t.boundary_faces,
    )


def _components(nodes: Iterable, adjacency: dict) -> int:
    nodes = list(nodes)
    seen = set()
    count = 0
    for s in nodes:
        if s in seen:
            continue
        count += 1
        stack = [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in adjacency.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return count


def validate(t: Triangulation) -> list[str]:
    """Return a list of human-readable violations (empty when valid).

    Checks are local: face valence, orientation coherence, vertex links
    (sphere for inner, disc for boundary vertices via Euler characteristic
    and connectivity), edge links, and connectivity of the boundary.
    Global manifoldness of pathological inputs is not certified.
    """
    out: list[str] = []
    if not t.tetrahedra:
        return ["empty triangulation"]
    ids = [x.id for x in t.tetrahedra]
    if len(set(ids)) != len(ids):
        out.append("duplicate tetrahedron ids")
    for x in t.tetrahedra:
        if len(x.vertices) != 4 or len(set(x.vertices)) != 4:
            out.append(f"tetrahedron {x.id} has repeated vertices {x.vertices}")
            return out
        if tuple(sorted(x.vertices)) != x.vertices:
            out.append(f"tetrahedron {x.id} vertices not ascending")
        if x.orientation not in (1, -1):
            out.append(f"tetrahedron {x.id} orientation {x.orientation} not +-1")
        if len(x.face_copies) != 4:
            out.append(f"tetrahedron {x.id} needs four face copy indices")
    if out:
        return out

    for key, owners in t.face_incidence.items():
        if len(owners) > 2:
            out.append(f"non-manifold: face {face_label(key)} lies in {len(owners)} tetrahedra")
        elif len(owners) == 2:
            a, b = (t.by_id[i] for i in owners)
            if a.induced_sign(key[0]) == b.induced_sign(key[0]):
                out.append(
                    f"orientation: tetrahedra {a.id} and {b.id} induce the same orientation on face {face_label(key)}"
                )
    if out:
        return out

    if not t.boundary_faces:
        out.append("closed complex: boundary is empty")
    else:
        adj = defaultdict(set)
        by_edge = defaultdict(list)
        for f in t.boundary_faces:
            for e in combinations(f[0], 2):
                by_edge[e].append(f)
        for fs in by_edge.values():
            for f in fs:
                adj[f].update(g for g in fs if g != f)
        if _components(t.boundary_faces, adj) != 1:
            out.append("boundary has more than one connected component")

    inner_v = set(t.inner_vertices)
    for v in t.vertices:
        tets = [x for x in t.tetrahedra if v in x.vertices]
        link_faces = {k for x in tets for k in x.faces() if v in k[0]}
        link_verts = {e for x in tets for e in x.edges() if v in e}
        chi = len(link_verts) - len(link_faces) + len(tets)
        adj = defaultdict(set)
        for k in link_faces:
            owners = t.face_incidence[k]
            for a in owners:
                adj[a].update(b for b in owners if b != a)
        connected = _components([x.id for x in tets], adj) == 1
        expected = 2 if v in inner_v else 1
        if chi != expected or not connected:
            kind = "sphere" if v in inner_v else "disc"
            out.append(f"vertex {v}: link is not a {kind} (euler {chi}, connected={connected})")

    for e in t.edges:
        tets = [x for x in t.tetrahedra if set(e) <= set(x.vertices)]
        faces = {k for x in tets for k in x.faces() if set(e) <= set(k[0])}
        want = len(tets) + (0 if e in t.inner_edges else 1)
        if len(faces) != want:
            out.append(f"edge {e}: link is neither a circle nor an arc")
    return out


def same_complex(a: Triangulation, b: Triangulation) -> bool:
    """Equality of stored complexes ignoring tetrahedron ids and face copies."""
    key = lambda t: sorted((x.vertices, x.orientation) for x in t.tetrahedra)
    return key(a) == key(b)


# moves --------------------------------------------------------------------


def _inherit(new_orderings, old: Sequence[Tetra], fresh: dict, ids: Sequence[int]) -> list:
    """Build new tetrahedra whose faces reuse the keys of the old tetrahedra
    holding the same triple; ``fresh`` supplies keys for brand-new faces."""
    old_keys = {}
    for x in old:
        for tr, c in x.faces():
            old_keys.setdefault(tr, (tr, c))
    out = []
    for tid, ordering in zip(ids, new_orderings):
        base = Tetra.from_ordering(tid, ordering)
        copies = []
        for tr in base.face_triples():
            if tr in fresh:
                copies.append(fresh[tr][1])
            else:
                copies.append(old_keys[tr][1])
        out.append(replace(base, face_copies=tuple(copies)))
    return out


def _rebuild(t: Triangulation, drop: Iterable[int], add: Iterable[Tetra]) -> Triangulation:
    drop = set(drop)
    return Triangulation(tuple(x for x in t.tetrahedra if x.id not in drop) + tuple(add))


def _free_copy(t: Triangulation, triple: Triple) -> int:
    used = {c for (tr, c) in t.faces if tr == triple}
    c = 0
    while c in used:
        c += 1
    return c


def pachner_23(t: Triangulation, pair: Sequence[int]) -> Triangulation:
    """Replace two tetrahedra sharing one face by three around a new edge."""
    if len(pair) != 2 or pair[0] == pair[1]:
        raise MoveError("2-3 move needs two distinct tetrahedra")
    try:
        A, B = (t.by_id[i] for i in pair)
    except KeyError as exc:
        raise MoveError(f"no tetrahedron with id {exc.args[0]}") from None
    shared = set(A.faces()) & set(B.faces())
    if len(shared) != 1:
        raise MoveError(f"tetrahedra {A.id} and {B.id} share {len(shared)} faces, need exactly 1")
    ((triple, _),) = shared
    (p,) = set(A.vertices) - set(triple)
    (q,) = set(B.vertices) - set(triple)
    if p == q or tuple(sorted((p, q))) in t.edges:
        raise MoveError(f"edge {tuple(sorted((p, q)))} already exists; 2-3 move would be degenerate")
    x1, x2, x3 = _face_then_apex(A, triple, p)
    orderings = [(x1, x2, q, p), (x2, x3, q, p), (x3, x1, q, p)]
    fresh = {tuple(sorted((x, p, q))): (tuple(sorted((x, p, q))), 0) for x in triple}
    new = _inherit(orderings, [A, B], fresh, t._next_ids(3))
    return _rebuild(t, [A.id, B.id], new)


def _face_then_apex(A: Tetra, triple: Triple, apex: int) -> tuple:
    """Order ``triple`` as (x1, x2, x3) with (x1, x2, x3, apex) positive."""
    x1, x2, x3 = triple
    if not A.is_positive((x1, x2, x3, apex)):
        x1, x2 = x2, x1
    return x1, x2, x3


def pachner_32(t: Triangulation, edge: Sequence[int]) -> Triangulation:
    """Inverse of :func:`pachner_23` around an inner edge of degree three."""
    p, q = edge
    e = tuple(sorted((p, q)))
    if e not in t.edges:
        raise MoveError(f"no edge {e}")
    if e not in t.inner_edges:
        raise MoveError(f"edge {e} lies on the boundary")
    around = t.tetras_with(p, q)
    if len(around) != 3:
        raise MoveError(f"edge {e} has degree {len(around)}, need 3")
    link = sorted({v for x in around for v in x.vertices} - {p, q})
    if len(link) != 3:
        raise MoveError(f"edge {e} link has {len(link)} vertices, need 3")
    if tuple(link) in {tr for (tr, _) in t.faces}:
        raise MoveError(f"face {tuple(link)} already exists; 3-2 move would be degenerate")
    T = around[0]
    x, y = [v for v in T.vertices if v not in (p, q)]
    if not T.is_positive((x, y, q, p)):
        x, y = y, x
    (z,) = set(link) - {x, y}
    orderings = [(x, y, z, p), (q, x, y, z)]
    tr = tuple(link)
    new = _inherit(orderings, around, {tr: (tr, 0)}, t._next_ids(2))
    return _rebuild(t, [x.id for x in around], new)


def pachner_14(t: Triangulation, tetra_id: int, new_vertex: int | None = None) -> Triangulation:
    """Insert a new inner vertex into a tetrahedron (one tetrahedron -> four)."""
    if tetra_id not in t.by_id:
        raise MoveError(f"no tetrahedron with id {tetra_id}")
    T = t.by_id[tetra_id]
    w = t.next_vertex_label() if new_vertex is None else new_vertex
    if w in t.vertices:
        raise MoveError(f"vertex label {w} already in use")
    v1, v2, v3, v4 = positive_ordering(T)
    orderings = [(v1, v2, v3, w), (v1, v4, v2, w), (v1, v3, v4, w), (v3, v2, v4, w)]
    fresh = {tuple(sorted((a, b, w))): (tuple(sorted((a, b, w))), 0)
             for a, b in combinations(T.vertices, 2)}
    new = _inherit(orderings, [T], fresh, t._next_ids(4))
    return _rebuild(t, [T.id], new)


def pachner_41(t: Triangulation, vertex: int) -> Triangulation:
    """Remove an inner vertex of degree four (four tetrahedra -> one)."""
    if vertex not in t.vertices:
        raise MoveError(f"no vertex {vertex}")
    if vertex not in t.inner_vertices:
        raise MoveError(f"vertex {vertex} is on the boundary")
    around = t.tetras_with(vertex)
    if len(around) != 4:
        raise MoveError(f"vertex {vertex} has degree {len(around)}, need 4")
    outer = sorted({v for x in around for v in x.vertices} - {vertex})
    opposite = {tuple(v for v in x.vertices if v != vertex) for x in around}
    if len(outer) != 4 or opposite != set(combinations(outer, 3)):
        raise MoveError(f"link of vertex {vertex} is not the boundary of a tetrahedron")
    T = around[0]
    a, b, c = [v for v in T.vertices if v != vertex]
    if not T.is_positive((a, b, c, vertex)):
        a, b = b, a
    (d,) = set(outer) - {a, b, c}
    new = _inherit([(a, b, c, d)], around, {}, t._next_ids(1))
    return _rebuild(t, [x.id for x in around], new)


def move_02(t: Triangulation, face: FaceKey | Sequence[int], new_vertex: int | None = None) -> Triangulation:
    """Replace an inner face by a pillow of two oppositely oriented tetrahedra."""
    key = _as_face_key(t, face)
    owners = t.face_incidence.get(key)
    if owners is None:
        raise MoveError(f"no face {face_label(key)}")
    if len(owners) != 2:
        raise MoveError(f"face {face_label(key)} is on the boundary")
    w = t.next_vertex_label() if new_vertex is None else new_vertex
    if w in t.vertices:
        raise MoveError(f"vertex label {w} already in use")
    A, B = (t.by_id[i] for i in owners)
    triple = key[0]
    verts = tuple(sorted(triple + (w,)))
    pos_w = verts.index(w)
    s1 = -A.induced_sign(triple) * (-1) ** pos_w
    id1, id2 = t._next_ids(2)
    c_new = _free_copy(t, triple)
    copies1, copies2 = [], []
    for tr in (verts[:3], (verts[0], verts[1], verts[3]), (verts[0], verts[2], verts[3]), verts[1:]):
        if tr == triple:
            copies1.append(key[1])
            copies2.append(c_new)
        else:
            copies1.append(0)
            copies2.append(0)
    P1 = Tetra(id1, verts, s1, tuple(copies1))
    P2 = Tetra(id2, verts, -s1, tuple(copies2))
    Bc = list(B.face_copies)
    Bc[B.face_triples().index(triple)] = c_new
    B2 = replace(B, face_copies=tuple(Bc))
    return Triangulation(tuple(B2 if x.id == B.id else x for x in t.tetrahedra) + (P1, P2))


def _as_face_key(t: Triangulation, face) -> FaceKey:
    if len(face) == 2 and isinstance(face[0], tuple):
        return (tuple(sorted(face[0])), face[1])
    triple = tuple(sorted(face))
    matches = [k for k in t.faces if k[0] == triple]
    if not matches:
        raise MoveError(f"no face {triple}")
    if len(matches) > 1:
        raise MoveError(f"face {triple} is ambiguous; give its copy index")
    return matches[0]
