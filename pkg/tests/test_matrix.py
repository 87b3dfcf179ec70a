import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from oracles import leibniz_det
from pentachain.matrix import (ExactMatrix, SingularMatrix, independent_rows, nullspace, rank,
                               rref, solve, submatrix)
from pentachain.scalar import GaussianRational, format_scalar, parse_scalar

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def square(k):
    return st.lists(fractions, min_size=k * k, max_size=k * k).map(lambda xs: ExactMatrix(k, k, xs))


def test_det_examples():
    assert ExactMatrix.identity(3).det() == 1
    assert ExactMatrix.from_rows([[1, 2], [3, 4]]).det() == -2
    assert ExactMatrix.from_rows([[1, -1], [-2, F(3, 2)]]).det() == F(-1, 2)
    assert ExactMatrix(0, 0, []).det() == 1


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_det_matches_leibniz(k):
    rng = random.Random(k)
    for _ in range(10):
        rows = [[F(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(k)] for _ in range(k)]
        assert ExactMatrix.from_rows(rows).det() == leibniz_det(rows)


@given(square(3), square(3))
def test_det_multiplicative(a, b):
    assert (a @ b).det() == a.det() * b.det()


def test_det_gaussian():
    i = GaussianRational(0, 1)
    m = ExactMatrix.from_rows([[i, 1], [1, i]])
    # i*i - 1 = -2
    assert m.det() == GaussianRational(-2, 0)
    m = ExactMatrix.from_rows([[GaussianRational(1, 1), 2], [F(1, 2), GaussianRational(0, -1)]])
    assert m.det() == GaussianRational(1, -1) * 1 - 1


def test_inverse_examples():
    assert ExactMatrix.identity(4).inverse() == ExactMatrix.identity(4)
    assert ExactMatrix.from_rows([[2]]).inverse() == ExactMatrix.from_rows([[F(1, 2)]])
    rng = random.Random(3)
    done = 0
    while done < 10:
        m = ExactMatrix(3, 3, [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(9)])
        if m.det() == 0:
            continue
        assert m @ m.inverse() == ExactMatrix.identity(3)
        assert m.inverse() @ m == ExactMatrix.identity(3)
        done += 1


def test_singular_inverse_names_simplex():
    m = ExactMatrix.from_rows([[1, 2], [2, 4]])
    with pytest.raises(SingularMatrix) as err:
        m.inverse(simplex=(1, 3))
    assert err.value.simplex == (1, 3)
    assert isinstance(err.value, ZeroDivisionError)


def test_rank_examples():
    assert ExactMatrix.zeros(2, 3).rank() == 0
    assert ExactMatrix.identity(4).rank() == 4
    assert rank(ExactMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])) == 2
    assert ExactMatrix.from_rows([[F(1, 3), F(2, 3)], [1, 2]]).rank() == 1


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_rank_via_rref(r, c, data):
    xs = data.draw(st.lists(fractions, min_size=r * c, max_size=r * c))
    m = ExactMatrix(r, c, xs)
    _, pivots = rref(m)
    assert m.rank() == len(pivots) == m.transpose().rank()


def test_submatrix():
    m = ExactMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert submatrix(m, [0, 1], [0, 1, 2]) == m
    assert m.submatrix([1], [2]) == ExactMatrix.from_rows([[6]])
    assert m.submatrix([0, 1], [0, 2]) == ExactMatrix.from_rows([[1, 3], [4, 6]])


def test_nullspace_and_solve():
    m = ExactMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
    ns = nullspace(m)
    assert ns.cols == 2
    assert (m @ ns).is_zero()
    a = ExactMatrix.from_rows([[2, 1], [1, 3]])
    b = ExactMatrix.column([3, 5])
    x = solve(a, b)
    assert a @ x == b


def test_independent_rows_first_come():
    m = ExactMatrix.from_rows([[1, 0], [2, 0], [0, 1], [1, 1]])
    assert independent_rows(m) == [0, 2]


def test_block_and_stack():
    a = ExactMatrix.identity(2)
    b = ExactMatrix.zeros(2, 1)
    m = ExactMatrix.block([[a, b], [ExactMatrix.zeros(1, 2), ExactMatrix.identity(1)]])
    assert m == ExactMatrix.identity(3)
    assert ExactMatrix.vstack([a, a]).shape == (4, 2)
    with pytest.raises(ValueError):
        ExactMatrix(2, 2, [1, 2, 3])


def test_json_round_trip():
    m = ExactMatrix.from_rows([[F(1, 2), -3], [GaussianRational(1, -2), 0]])
    assert ExactMatrix.from_json(m.to_json()) == m
    assert m.to_json()[0] == ["1/2", "-3"]


@pytest.mark.parametrize("text", ["3", "-7/4", "1/2+3*i", "0-1/3*i"])
def test_scalar_text_round_trip(text):
    assert format_scalar(parse_scalar(text)) == text


def test_scalar_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_scalar("1.5")
    with pytest.raises(ValueError):
        parse_scalar("abc")


def test_gaussian_field_ops():
    z = GaussianRational(F(1, 2), 3)
    w = GaussianRational(-2, F(1, 3))
    assert (z * w) / w == z
    assert z - z == GaussianRational(0, 0)
    assert z * z.conjugate() == GaussianRational(F(1, 4) + 9, 0)
