"""Exact Grassmann-Berezin pentagon equations and torsion invariants of
triangulated 3-manifolds with one-component boundary."""
from .chain import ChainComplexData, Coloring, build_complex, enumerate_colorings, verify_complex
from .coords import CoordinateAssignment, random_coordinates
from .grassmann import GrassmannAlgebra, GrassmannElement, berezin, berezin_multi, gen_fun, gen_fun_inner, g_mul
from .invariants import (invariant_IC, matrix_weight, scalar_weight, state_sum_scalar,
                         tentative_invariant, torsion, verify_pentagon_matrix, verify_pentagon_scalar)
from .kernels import BACKEND
from .matrix import ExactMatrix, SingularMatrix
from .scalar import GaussianRational
from .triangulation import (Tetra, Triangulation, classify, move_02, pachner_14, pachner_23,
                            pachner_32, pachner_41, validate)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ChainComplexData",
    "Coloring",
    "CoordinateAssignment",
    "ExactMatrix",
    "GaussianRational",
    "GrassmannAlgebra",
    "GrassmannElement",
    "SingularMatrix",
    "Tetra",
    "Triangulation",
    "berezin",
    "berezin_multi",
    "build_complex",
    "classify",
    "enumerate_colorings",
    "g_mul",
    "gen_fun",
    "gen_fun_inner",
    "invariant_IC",
    "matrix_weight",
    "move_02",
    "pachner_14",
    "pachner_23",
    "pachner_32",
    "pachner_41",
    "random_coordinates",
    "scalar_weight",
    "state_sum_scalar",
    "tentative_invariant",
    "torsion",
    "validate",
    "verify_complex",
    "verify_pentagon_matrix",
    "verify_pentagon_scalar",
]
