"""Dual matrices ``value + eps*differential`` with ``eps**2 == 0``."""
from __future__ import annotations

from dataclasses import dataclass

from .matrix import ExactMatrix


def _parts(x):
    if isinstance(x, DualMatrix):
        return x.value, x.differential
    if isinstance(x, ExactMatrix):
        return x, ExactMatrix.zeros(x.rows, x.cols)
    raise TypeError(f"expected a matrix, got {type(x).__name__}")


@dataclass(frozen=True)
class DualMatrix:
    value: ExactMatrix
    differential: ExactMatrix

    def __post_init__(self):
        if self.value.shape != self.differential.shape:
            raise ValueError("value and differential must have the same shape")

    @classmethod
    def constant(cls, m: ExactMatrix) -> "DualMatrix":
        return cls(m, ExactMatrix.zeros(m.rows, m.cols))

    @property
    def shape(self):
        return self.value.shape

    def __add__(self, other):
        b, db = _parts(other)
        return DualMatrix(self.value + b, self.differential + db)

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        b, db = _parts(other)
        return DualMatrix(self.value - b, self.differential - db)

    def __rsub__(self, other):
        a, da = _parts(other)
        return DualMatrix(a - self.value, da - self.differential)

    def __neg__(self):
        return DualMatrix(-self.value, -self.differential)

    def __matmul__(self, other):
        b, db = _parts(other)
        return DualMatrix(self.value @ b, self.differential @ b + self.value @ db)

    def __rmatmul__(self, other):
        a, da = _parts(other)
        return DualMatrix(a @ self.value, da @ self.value + a @ self.differential)

    def inverse(self, simplex=None) -> "DualMatrix":
        inv = self.value.inverse(simplex=simplex)
        return DualMatrix(inv, -(inv @ self.differential @ inv))
