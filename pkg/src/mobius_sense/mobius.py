"""Mobius transformations of homogeneous matrix polynomials.

``M_A(P)(gamma, delta) = sum_i (a gamma + b delta)^i (c gamma + d delta)^(k-i) B_i``
for an invertible ``A = [[a, b], [c, d]]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .polycore import MAX_DEGREE, HomMatrixPolynomial, evaluate

_PASCAL = np.zeros((MAX_DEGREE + 1, MAX_DEGREE + 1), dtype=np.int64)
for _s in range(MAX_DEGREE + 1):
    _PASCAL[_s, 0] = 1
    for _t in range(1, _s + 1):
        _PASCAL[_s, _t] = _PASCAL[_s - 1, _t - 1] + _PASCAL[_s - 1, _t]
_PASCAL.setflags(write=False)


def binom(s: int, t: int) -> int:
    """Binomial coefficient with ``C(s, t) = 0`` for ``t < 0`` or ``t > s``."""
    if s < 0:
        raise ValueError("binom requires s >= 0")
    if s > MAX_DEGREE:
        raise ValueError(f"binom table only covers s <= {MAX_DEGREE}")
    if t < 0 or t > s:
        return 0
    return int(_PASCAL[s, t])


@dataclass(frozen=True)
class ProjPoint:
    """A representative ``[alpha, beta]`` of a point of the projective line."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        if a == 0 and b == 0:
            raise ValueError("(0, 0) does not represent a projective point")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def from_array(cls, v) -> "ProjPoint":
        return cls(v[0], v[1])

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    def scaled(self, t: complex) -> "ProjPoint":
        return ProjPoint(t * self.alpha, t * self.beta)

    def normalized(self) -> "ProjPoint":
        """Unit 2-norm representative whose first nonzero component is real positive."""
        v = self.as_array()
        v = v / np.linalg.norm(v)
        lead = v[0] if v[0] != 0 else v[1]
        v = v * (abs(lead) / lead)
        # exact phase fix for the leading component
        if v[0] != 0:
            v[0] = abs(v[0])
        else:
            v[1] = abs(v[1])
        # + 0.0 clears negative zeros
        return ProjPoint(v[0] + 0.0, v[1] + 0.0)

    def norm(self, ord=2) -> float:
        return float(np.linalg.norm(self.as_array(), ord))


class Mobius2x2:
    """Invertible 2x2 complex matrix ``[[a, b], [c, d]]`` inducing ``M_A``."""

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = complex(a), complex(b), complex(c), complex(d)
        if self.det == 0:
            raise ValueError("matrix is singular; Mobius transformations need det(A) != 0")

    @classmethod
    def from_matrix(cls, M) -> "Mobius2x2":
        M = np.asarray(M, dtype=complex)
        if M.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        return cls(M[0, 0], M[0, 1], M[1, 0], M[1, 1])

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @cached_property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @cached_property
    def adj(self) -> np.ndarray:
        return np.array([[self.d, -self.b], [-self.c, self.a]], dtype=complex)

    @cached_property
    def norm_inf(self) -> float:
        return max(abs(self.a) + abs(self.b), abs(self.c) + abs(self.d))

    @cached_property
    def norm_1(self) -> float:
        return max(abs(self.a) + abs(self.c), abs(self.b) + abs(self.d))

    @cached_property
    def norm_max(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    @cached_property
    def inv_norm_inf(self) -> float:
        # ||adj(A)||_inf = ||A||_1
        return self.norm_1 / abs(self.det)

    @cached_property
    def inv_norm_1(self) -> float:
        return self.norm_inf / abs(self.det)

    @cached_property
    def cond_inf(self) -> float:
        return self.norm_inf * self.inv_norm_inf

    @cached_property
    def cond_2(self) -> float:
        s = np.linalg.svd(self.matrix, compute_uv=False)
        return float(s[0] / s[-1])

    def inverse(self) -> "Mobius2x2":
        det = self.det
        return Mobius2x2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def to_dict(self) -> dict:
        return {name: [getattr(self, name).real, getattr(self, name).imag] for name in "abcd"}

    @classmethod
    def from_dict(cls, doc: dict) -> "Mobius2x2":
        try:
            vals = [complex(*doc[name]) if isinstance(doc[name], (list, tuple)) else complex(doc[name])
                    for name in "abcd"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed Mobius matrix document: {exc}") from None
        return cls(*vals)

    def __eq__(self, other):
        if not isinstance(other, Mobius2x2):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self):
        return f"Mobius2x2(a={self.a}, b={self.b}, c={self.c}, d={self.d})"


def identity() -> Mobius2x2:
    return Mobius2x2(1, 0, 0, 1)


def cayley_plus() -> Mobius2x2:
    return Mobius2x2(1, 1, -1, 1)


def cayley_minus() -> Mobius2x2:
    return Mobius2x2(1, -1, 1, 1)


def reversal_matrix() -> Mobius2x2:
    return Mobius2x2(0, 1, 1, 0)


PRESETS = {
    "identity": identity,
    "cayley+": cayley_plus,
    "cayley-": cayley_minus,
    "reversal": reversal_matrix,
}


def compose(A: Mobius2x2, B: Mobius2x2) -> Mobius2x2:
    """Matrix inducing ``M_A o M_B``, which is ``B @ A`` (note the order)."""
    return Mobius2x2.from_matrix(B.matrix @ A.matrix)


def scale(A: Mobius2x2, mu: complex) -> Mobius2x2:
    mu = complex(mu)
    if mu == 0:
        raise ValueError("scaling factor must be nonzero")
    return Mobius2x2(mu * A.a, mu * A.b, mu * A.c, mu * A.d)


def coeff_matrix(A: Mobius2x2, k: int) -> np.ndarray:
    """(k+1)x(k+1) scalar matrix ``T`` with ``B~_l = sum_i T[l, i] B_i``."""
    if k > MAX_DEGREE:
        raise ValueError(f"degree {k} exceeds the cap {MAX_DEGREE}")
    return np.asarray(kernels.mobius_coeff_matrix(A.a, A.b, A.c, A.d, k, _PASCAL))


def mobius_transform(A: Mobius2x2, P: HomMatrixPolynomial) -> HomMatrixPolynomial:
    """Coefficients of ``M_A(P)`` from the explicit binomial formula."""
    T = coeff_matrix(A, P.degree)
    return HomMatrixPolynomial(np.tensordot(T, P.coeffs, axes=(1, 0)))


def interpolation_nodes(k: int) -> np.ndarray:
    """k+1 unit points ``(1, w^j) / sqrt(2)`` with ``w`` a primitive (k+1)-th root of unity.

    The resulting interpolation matrix is a scaled DFT matrix (condition number 1).
    """
    w = np.exp(2j * np.pi * np.arange(k + 1) / (k + 1))
    return np.column_stack([np.ones(k + 1, dtype=complex), w]) / np.sqrt(2)


def mobius_by_interpolation(A: Mobius2x2, P: HomMatrixPolynomial) -> HomMatrixPolynomial:
    """``M_A(P)`` by sampling the substituted polynomial and solving for coefficients.

    Independent of the binomial formula; intended as a cross-check.
    """
    k = P.degree
    nodes = interpolation_nodes(k)
    m, n = P.shape
    ell = np.arange(k + 1)
    V = nodes[:, :1] ** ell * nodes[:, 1:] ** (k - ell)
    samples = np.empty((k + 1, m * n), dtype=complex)
    for j, (g, d) in enumerate(nodes):
        samples[j] = evaluate(P, (A.a * g + A.b * d, A.c * g + A.d * d)).ravel()
    cond = np.linalg.cond(V)
    assert cond < 1e6, f"interpolation matrix numerically singular (cond={cond:.2e})"
    coeffs = np.linalg.solve(V, samples)
    return HomMatrixPolynomial(coeffs.reshape(k + 1, m, n))


def coeff_norm_bound(A: Mobius2x2, P: HomMatrixPolynomial) -> float:
    """Upper bound ``||A||_inf^k C(k, floor(k/2)) sum_i ||B_i||_2`` on every ``||B~_l||_2``."""
    k = P.degree
    return A.norm_inf**k * binom(k, k // 2) * float(np.sum(P.coeff_norms()))


def map_eigenvalue(A: Mobius2x2, rep: ProjPoint) -> ProjPoint:
    """Representative ``A^{-1} [alpha, beta]`` of the associated eigenvalue of ``M_A(P)``."""
    det = A.det
    return ProjPoint((A.d * rep.alpha - A.b * rep.beta) / det,
                     (A.a * rep.beta - A.c * rep.alpha) / det)


def push_eigenvalue(A: Mobius2x2, rep: ProjPoint) -> ProjPoint:
    """``A [gamma, delta]``: carries a point for ``M_A(P)`` back to one for ``P``."""
    return ProjPoint(A.a * rep.alpha + A.b * rep.beta, A.c * rep.alpha + A.d * rep.beta)


def poly_rel_diff(P: HomMatrixPolynomial, Q: HomMatrixPolynomial) -> float:
    """Largest coefficient difference relative to the largest coefficient of ``P``."""
    if P.degree != Q.degree or P.shape != Q.shape:
        return math.inf
    scale_ = max(float(np.max(np.abs(P.coeffs))), np.finfo(float).tiny)
    return float(np.max(np.abs(P.coeffs - Q.coeffs))) / scale_
