import random
from fractions import Fraction as F

import pytest

from pentachain.chain import tetra_block
from pentachain.coords import (AffineParams, ConsistencyError, CoordinateAssignment, SamplingError,
                               differential_f2, differential_f3, f1_apply, f2_apply, f3_apply,
                               phi_direct, phi_permuted, random_coordinates, random_matrix)
from pentachain.matrix import ExactMatrix

Z3 = CoordinateAssignment.scalars([0, 1, 2])
Z4 = CoordinateAssignment.scalars([0, 1, 2, 3])


def one(n):
    return ExactMatrix.identity(n)


def m1(x):
    return ExactMatrix.from_rows([[x]])


def invertible(rng, n):
    while True:
        m = random_matrix(rng, n, 9)
        if m.det():
            return m


def test_scalars_are_keyed_from_one():
    assert Z4[1] == m1(0) and Z4[4] == m1(3)
    assert Z4.det_diff(3, 4) == -1


def test_f1_identity_and_translation():
    z = random_coordinates(range(1, 5), 2, 1)
    assert f1_apply(AffineParams(one(2), ExactMatrix.zeros(2, 2)), z) == z.zeta
    b = random_matrix(random.Random(2), 2)
    pts = f1_apply(AffineParams(one(2), b), z)
    for i in range(1, 5):
        for j in range(1, 5):
            assert pts[i] - pts[j] == z.diff(i, j)


@pytest.mark.parametrize("seed", range(10))
def test_f2_after_f1_is_identity(seed):
    rng = random.Random(seed)
    z = random_coordinates(range(1, 5), 2, rng)
    pts = f1_apply(AffineParams(invertible(rng, 2), random_matrix(rng, 2)), z)
    for face in [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]:
        assert f2_apply(pts, z, face) == one(2)


def test_f2_hand_value():
    pts = {1: m1(0), 2: m1(1), 3: m1(3)}
    assert f2_apply(pts, Z3, (1, 2, 3)) == m1(F(2, 3))
    assert f2_apply(Z3.zeta, Z3, (1, 2, 3)) == m1(1)
    with pytest.raises(ValueError):
        f2_apply(pts, Z3, (2, 1, 3))


@pytest.mark.parametrize("seed", range(5))
def test_phi_permutations(seed):
    rng = random.Random(seed)
    z = random_coordinates(range(1, 4), 2, rng)
    pts = random_coordinates(range(1, 4), 2, rng).zeta
    sorted_phi = lambda tr: f2_apply(pts, z, tr)
    assert phi_permuted(sorted_phi, z, (1, 2, 3)) == sorted_phi((1, 2, 3))
    assert phi_permuted(sorted_phi, z, (1, 3, 2)) == sorted_phi((1, 2, 3)).inverse()
    # every ordering agrees with the direct formula
    for o in [(2, 3, 1), (3, 1, 2), (2, 1, 3), (3, 2, 1)]:
        assert phi_permuted(sorted_phi, z, o) == phi_direct(pts, z, o)


@pytest.mark.parametrize("seed", range(10))
def test_f3_after_f2_is_identity(seed):
    rng = random.Random(100 + seed)
    n = 1 + seed % 2
    z = random_coordinates(range(1, 5), n, rng)
    pts = random_coordinates(range(1, 5), n, rng).zeta
    phi = lambda o: phi_permuted(lambda tr: f2_apply(pts, z, tr), z, o)
    for v in (1, 2, 3, 4):
        assert f3_apply(phi, (1, 2, 3, 4), v) == one(n)


def test_differential_f2_examples():
    zero = {4: ExactMatrix.zeros(1, 1)}
    z = CoordinateAssignment.scalars([0, 1, 2, 5])
    out = differential_f2(z, zero, [(1, 2, 4), (1, 3, 4)])
    assert all(c.is_zero() for c in out.values())
    # unit perturbation of vertex 1 on face 123: zeta_12^-1 - zeta_13^-1
    out = differential_f2(Z3, {1: m1(1)}, [(1, 2, 3)])
    assert out[(1, 2, 3)] == m1(F(-1) - F(-1, 2))


@pytest.mark.parametrize("n", [1, 2])
def test_differential_f2_random(n):
    rng = random.Random(n)
    z = random_coordinates(range(1, 6), n, rng)
    dz = {5: random_matrix(rng, n, 9)}
    faces = [(1, 2, 5), (1, 3, 5), (2, 4, 5), (3, 4, 5)]
    for col in range(n):
        out = differential_f2(z, dz, faces, column=col)
        assert all(v.shape == (n, 1) for v in out.values())


def test_differential_f3_zero_and_block_rows():
    zeros = {}
    dpsi = differential_f3(Z4, zeros, (1, 2, 3, 4))
    assert all(d.is_zero() for d in dpsi)
    block = tetra_block(Z4, (1, 2, 3, 4))
    faces = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]
    for c, tr in enumerate(faces):
        d1, d2 = differential_f3(Z4, {tr: m1(1)}, (1, 2, 3, 4))
        assert [d1[0, 0], d2[0, 0]] == [block[0, c], block[1, c]]


@pytest.mark.parametrize("seed", range(4))
def test_differential_f3_random_n2(seed):
    rng = random.Random(seed)
    z = random_coordinates(range(1, 5), 2, rng)
    dphi = {tr: random_matrix(rng, 2, 9) for tr in [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]}
    # check=True compares against the dual-number evaluation and raises on mismatch
    differential_f3(z, dphi, (1, 2, 3, 4))


def test_random_coordinates_deterministic_and_generic():
    a = random_coordinates(range(1, 6), 2, 42)
    b = random_coordinates(range(1, 6), 2, 42)
    assert a.zeta == b.zeta
    assert a.singular_pairs([(i, j) for i in range(1, 6) for j in range(i + 1, 6)]) == []


def test_random_coordinates_gives_up():
    with pytest.raises(SamplingError):
        # only 3 distinct values available for 5 vertices
        random_coordinates(range(1, 6), 1, random.Random(0), bound=1, retries=4)


def test_consistency_error_is_assertion():
    assert issubclass(ConsistencyError, AssertionError)
