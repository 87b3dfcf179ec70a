"""Property checks run by ``pentachain selftest``.

Every check is a function of a seeded RNG returning ``(ok, detail)``; the
identities hold for every seed, so the seed changes inputs, never outcomes.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .chain import (Coloring, boundary_conditions_rank, build_complex, enumerate_colorings,
                    verify_complex)
from .coords import (AffineParams, CoordinateAssignment, differential_f2, differential_f3,
                     f1_apply, f2_apply, f3_apply, phi_permuted, random_coordinates,
                     random_matrix)
from .dual import DualMatrix
from .grassmann import NESTED, berezin_multi, gen_fun, gen_fun_inner
from .invariants import (face_generators, gauge_transform, invariant_IC, matrix_weight,
                         pentagon_clusters, random_interior_moves, scalar_weight,
                         verify_pentagon_matrix, verify_pentagon_scalar)
from .matrix import ExactMatrix
from .triangulation import Triangulation, move_02, pachner_14

__all__ = ["CHECKS", "GROUPS", "CheckResult", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    group: str
    name: str
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"group": self.group, "name": self.name, "ok": self.ok, "detail": self.detail}


def _invertible(rng, n):
    while True:
        m = random_matrix(rng, n, 9)
        if m.det() != 0:
            return m


def _det_product(rng):
    for k in range(1, 6):
        a, b = random_matrix(rng, k, 9), random_matrix(rng, k, 9)
        if (a @ b).det() != a.det() * b.det():
            return False, f"det(AB) != det(A)det(B) at size {k}"
    return True, "sizes 1..5"


def _inverse(rng):
    m = _invertible(rng, 3)
    return m @ m.inverse() == ExactMatrix.identity(3), "3x3 round trip"


def _dual_inverse(rng):
    a, da = _invertible(rng, 3), random_matrix(rng, 3, 9)
    inv = DualMatrix(a, da).inverse()
    ai = a.inverse()
    return inv.differential == -(ai @ da @ ai), "d(A^-1) = -A^-1 dA A^-1"


def _concatenation(rng, trials=20):
    for _ in range(trials):
        m = rng.randint(3, 6)
        p = rng.randint(1, m - 1)
        q = rng.randint(1, m - p)
        A, B = (ExactMatrix(r, m, [rng.randint(-4, 4) for _ in range(r * m)]) for r in (p, q))
        gens = list(range(m))
        fa = gen_fun(A, gens)
        if gen_fun(ExactMatrix.vstack([A, B]), gens, fa.algebra) != fa * gen_fun(B, gens, fa.algebra):
            return False, f"concatenation failed for {p}+{q} rows, {m} columns"
    return True, f"{trials} random pairs"


def _inner_columns(rng, trials=20):
    for _ in range(trials):
        m = rng.randint(2, 6)
        r = rng.randint(1, m)
        A = ExactMatrix(r, m, [rng.randint(-4, 4) for _ in range(r * m)])
        gens = list(range(m))
        inner = sorted(rng.sample(gens, rng.randint(0, r)))
        full = gen_fun(A, gens)
        if gen_fun_inner(A, gens, inner, full.algebra) != berezin_multi(full, inner, NESTED):
            return False, f"inner columns {inner} of a {r}x{m} matrix"
    return True, f"{trials} random matrices"


def _f2f1(rng):
    z = random_coordinates(range(1, 5), 2, rng)
    params = AffineParams(_invertible(rng, 2), random_matrix(rng, 2, 9))
    pts = f1_apply(params, z)
    one = ExactMatrix.identity(2)
    ok = all(f2_apply(pts, z, tr) == one for tr in ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)))
    return ok, "phi = 1 after an affine map"


def _f3f2(rng):
    z = random_coordinates(range(1, 5), 2, rng)
    pts = random_coordinates(range(1, 5), 2, rng).zeta
    phi = lambda o: phi_permuted(lambda tr: f2_apply(pts, z, tr), z, o)
    ok = all(f3_apply(phi, (1, 2, 3, 4), v) == ExactMatrix.identity(2) for v in (1, 2, 3, 4))
    return ok, "psi = 1 at random points"


def _differentials(rng):
    t = pachner_14(Triangulation.from_tuples([(1, 2, 3, 4)]), 1)
    for n in (1, 2):
        z = random_coordinates(t.vertices, n, rng)
        differential_f2(z, {5: random_matrix(rng, n, 9)}, [f[0] for f in t.faces])
        for x in t.ordered:
            dphi = {tr: random_matrix(rng, n, 9) for tr, _ in x.faces()}
            differential_f3(z, dphi, x.vertices)
    return True, "dual-number differentials agree, n = 1, 2"


def _complex_conditions(rng):
    base = Triangulation.from_tuples([(1, 2, 3, 4)])
    ball = pachner_14(base, 1)
    lhs, _ = pentagon_clusters()
    pillow = move_02(lhs, (1, 2, 3), 6)
    for n in (1, 2):
        z = random_coordinates(range(1, 6), n, rng)
        hist, zz = random_interior_moves(ball, z, 2, rng)
        cases = [(ball, z), (pillow, random_coordinates([6], n, rng, fixed=z)), (hist[-1][1], zz)]
        for t, coords in cases:
            cols = enumerate_colorings(t, n)
            data = build_complex(t, coords, cols[rng.randrange(len(cols))])
            rep = verify_complex(data)
            if not rep["ok"]:
                return False, f"nonzero composition, n = {n}, {len(t.tetrahedra)} tetrahedra"
    return True, "ball, pillow, random moves; n = 1, 2"


def _boundary_rank(rng):
    lhs, rhs = pentagon_clusters()
    for n in (1, 2):
        z = random_coordinates(range(1, 6), n, rng)
        for t in (lhs, rhs):
            r = boundary_conditions_rank(t, z)
            if r != 3 * n:
                return False, f"rank {r} != {3 * n}"
    return True, "rank 3n for n = 1, 2"


def _pentagon_scalar(rng):
    for _ in range(5):
        z = random_coordinates(range(1, 6), 1, rng)
        if not verify_pentagon_scalar(z).equal:
            return False, "scalar pentagon failed"
    return True, "5 random points"


def _pentagon_matrix(rng):
    z = random_coordinates(range(1, 6), 2, rng)
    return verify_pentagon_matrix(z).equal, "n = 2"


def _sixty(rng):
    z = random_coordinates(range(1, 5), 2, rng)
    k = len(matrix_weight(z, (1, 2, 3, 4)))
    return k == 60, f"{k} monomials"


def _gauge(rng):
    z = random_coordinates(range(1, 5), 1, rng)
    gens = face_generators([((1, 2, 3), 0), ((1, 2, 4), 0), ((1, 3, 4), 0), ((2, 3, 4), 0)], 1)
    w = scalar_weight(z, (1, 2, 3, 4))
    return gen_fun(gauge_transform(z, (1, 2, 3, 4)), gens, w.algebra) == w, "n = 1"


def _move_invariance(rng):
    base = Triangulation.from_tuples([(1, 2, 3, 4)])
    z = CoordinateAssignment.scalars([0, 1, 2, 3])
    c = Coloring.parse("123:0,124:0")
    v0 = invariant_IC(base, z, c).value
    z = random_coordinates([5], 1, rng, fixed=z)
    hist, z = random_interior_moves(pachner_14(base, 1), z, 3, rng)
    ok = all(invariant_IC(t, z, c).value == v0 for _, t in hist)
    return ok, f"|I| = {v0} across {len(hist)} triangulations"


CHECKS: list[tuple[str, str, Callable]] = [
    ("algebra", "det multiplicative", _det_product),
    ("algebra", "inverse round trip", _inverse),
    ("algebra", "dual inverse", _dual_inverse),
    ("grassmann", "concatenation", _concatenation),
    ("grassmann", "inner columns", _inner_columns),
    ("coords", "F2 o F1 = 1", _f2f1),
    ("coords", "F3 o F2 = 1", _f3f2),
    ("coords", "differentials", _differentials),
    ("complex", "f3 f2 = 0, f4 f3 = 0", _complex_conditions),
    ("complex", "boundary condition rank", _boundary_rank),
    ("pentagon", "scalar pentagon", _pentagon_scalar),
    ("pentagon", "matrix pentagon", _pentagon_matrix),
    ("pentagon", "60 monomials", _sixty),
    ("pentagon", "gauge reduction", _gauge),
    ("invariants", "Pachner invariance", _move_invariance),
]

GROUPS = sorted({g for g, _, _ in CHECKS})


def run_checks(seed: int = 0, only: list[str] | None = None) -> list[CheckResult]:
    out = []
    for group, name, fn in CHECKS:
        if only and group not in only:
            continue
        rng = random.Random(f"{seed}/{name}")
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crash is a failed check, reported not raised
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(group, name, bool(ok), detail))
    return out
