"""Mobius transforms of homogeneous matrix polynomials and their effect on
eigenvalue condition numbers and backward errors."""

__version__ = "0.1.0"

from .kernels import BACKEND
from .polycore import HomMatrixPolynomial, WeightScheme, evaluate, poly_inf_norm, weights_of
from .mobius import (
    Mobius2x2,
    ProjPoint,
    cayley_minus,
    cayley_plus,
    compose,
    identity,
    map_eigenvalue,
    mobius_transform,
    push_eigenvalue,
    reversal_matrix,
)
from .eigensolve import EigenTriple, SingularPolynomialError, eigentriples, eigenvalues, eigenvectors
from .sensitivity import (
    SensitivityRecord,
    backward_error,
    bounds_backward,
    bounds_cond,
    cond_stewart_sun,
    quotient_backward,
    quotient_exact,
)

__all__ = [
    "BACKEND",
    "EigenTriple",
    "HomMatrixPolynomial",
    "Mobius2x2",
    "ProjPoint",
    "SensitivityRecord",
    "SingularPolynomialError",
    "WeightScheme",
    "backward_error",
    "bounds_backward",
    "bounds_cond",
    "cayley_minus",
    "cayley_plus",
    "compose",
    "cond_stewart_sun",
    "eigentriples",
    "eigenvalues",
    "eigenvectors",
    "evaluate",
    "identity",
    "map_eigenvalue",
    "mobius_transform",
    "poly_inf_norm",
    "push_eigenvalue",
    "quotient_backward",
    "quotient_exact",
    "reversal_matrix",
    "weights_of",
]
