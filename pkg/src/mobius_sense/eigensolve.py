"""Homogeneous eigenvalues and eigenvectors of regular square matrix polynomials.

Eigenvalues come from the first Frobenius companion pencil ``gamma X + delta Y``
solved with a dense QZ algorithm that returns homogeneous pairs. Eigenvectors are
extracted from the SVD of ``P`` evaluated at the eigenvalue.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .mobius import ProjPoint
from .polycore import (
    HomMatrixPolynomial,
    eval_d_alpha,
    eval_d_beta,
    evaluate,
    poly_inf_norm,
)

TOL_EIG = 1e-8
SIMPLE_RATIO = 10.0
_REGULARITY_TOL = 1e-13


class SingularPolynomialError(ValueError):
    """Raised when a polynomial is singular or numerically close to singular."""


@dataclass(frozen=True)
class CompanionPencil:
    """First companion pencil ``gamma X + delta Y`` of a square polynomial."""

    X: np.ndarray
    Y: np.ndarray

    def evaluate(self, gamma: complex, delta: complex) -> np.ndarray:
        return gamma * self.X + delta * self.Y


@dataclass(frozen=True)
class EigenTriple:
    """A simple eigenvalue with unit right and left eigenvectors.

    Attributes
    ----------
    value : ProjPoint
        Normalized eigenvalue.
    x, y : ndarray
        Right and left eigenvectors, ``P x = 0`` and ``y^* P = 0``.
    sep : float
        ``sigma_{n-1} - sigma_n`` of ``P(value)``.
    simple : bool
        False when ``sigma_{n-1} / sigma_n < 10`` (possible cluster).
    residual_ok : bool
        Both residuals below ``1e-8 ||P||_inf max(|alpha|, |beta|)^k``.
    """

    value: ProjPoint
    x: np.ndarray
    y: np.ndarray
    sep: float
    simple: bool
    residual_ok: bool

    @property
    def flagged(self) -> bool:
        return not (self.simple and self.residual_ok)


def companion_pencil(P: HomMatrixPolynomial) -> CompanionPencil:
    """Build ``X = diag(B_k, I)`` and ``Y`` with first block row ``[B_{k-1} ... B_0]``."""
    if not P.is_square:
        raise ValueError("companion pencil requires a square polynomial")
    k, n = P.degree, P.rows
    if k < 1:
        raise ValueError("companion pencil requires degree >= 1")
    N = n * k
    X = np.eye(N, dtype=complex)
    X[:n, :n] = P.coeffs[k]
    Y = np.zeros((N, N), dtype=complex)
    for j in range(k):
        Y[:n, j * n:(j + 1) * n] = P.coeffs[k - 1 - j]
    for j in range(1, k):
        Y[j * n:(j + 1) * n, (j - 1) * n:j * n] = -np.eye(n)
    return CompanionPencil(X, Y)


def _normalize(alpha: complex, beta: complex) -> ProjPoint:
    return ProjPoint(alpha, beta).normalized()


def _check_regular(P: HomMatrixPolynomial) -> None:
    # fixed probe points keep the check deterministic
    rng = np.random.default_rng(20240517)
    pts = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    scale = poly_inf_norm(P)
    for a, b in pts:
        s = np.linalg.svd(evaluate(P, (a, b)), compute_uv=False)
        ref = max(abs(a), abs(b)) ** P.degree * scale
        if s[-1] > _REGULARITY_TOL * ref:
            return
    raise SingularPolynomialError("singular or near-singular polynomial")


def eigenvalues(P: HomMatrixPolynomial, check: bool = True) -> list[ProjPoint]:
    """All ``n k`` homogeneous eigenvalues of a regular square polynomial.

    Infinite eigenvalues are returned as points on the ``(1, 0)`` line.
    """
    if not P.is_square:
        raise ValueError("eigenvalues require a square polynomial")
    if P.degree == 0:
        return []
    if check:
        _check_regular(P)
    pencil = companion_pencil(P)
    # beta_h * Y v = alpha_h * (-X) v  <=>  alpha_h X v + beta_h Y v = 0
    w = scipy.linalg.eig(pencil.Y, -pencil.X, right=False, homogeneous_eigvals=True)
    out = []
    for a, b in zip(w[0], w[1]):
        if a == 0 and b == 0:
            raise SingularPolynomialError("singular or near-singular polynomial")
        out.append(_normalize(a, b))
    return out


def _svd_at(P: HomMatrixPolynomial, pt: ProjPoint):
    return np.linalg.svd(evaluate(P, pt))


def refine_eigenvalue(P: HomMatrixPolynomial, value: ProjPoint, steps: int = 3) -> ProjPoint:
    """Newton steps on ``sigma_min(P(v))`` along the direction orthogonal to ``v``.

    A step is accepted only when it decreases the smallest singular value.
    """
    v = _normalize(value.alpha, value.beta)
    _, s, _ = _svd_at(P, v)
    best = s[-1]
    for _ in range(steps):
        if best == 0:
            break
        U, s, Vh = _svd_at(P, v)
        x, y = Vh[-1].conj(), U[:, -1]
        w1, w2 = -np.conj(v.beta), np.conj(v.alpha)
        f = y.conj() @ evaluate(P, v) @ x
        deriv = y.conj() @ (w1 * eval_d_alpha(P, v) + w2 * eval_d_beta(P, v)) @ x
        if deriv == 0:
            break
        t = -f / deriv
        cand = _normalize(v.alpha + t * w1, v.beta + t * w2)
        s_new = np.linalg.svd(evaluate(P, cand), compute_uv=False)[-1]
        if not s_new < best:
            break
        v, best = cand, s_new
    return v


def eigenvectors(P: HomMatrixPolynomial, value: ProjPoint) -> EigenTriple:
    """Right/left eigenvectors from the smallest singular triplet of ``P(value)``."""
    v = _normalize(value.alpha, value.beta)
    M = evaluate(P, v)
    U, s, Vh = np.linalg.svd(M)
    x = Vh[-1].conj()
    y = U[:, -1].copy()
    if s.size > 1:
        sep = float(s[-2] - s[-1])
        simple = bool(s[-2] > 0 and s[-2] >= SIMPLE_RATIO * s[-1])
    else:
        sep = float("inf")
        simple = True
    tol = TOL_EIG * poly_inf_norm(P) * max(abs(v.alpha), abs(v.beta)) ** P.degree
    res_r = np.linalg.norm(M @ x)
    res_l = np.linalg.norm(y.conj() @ M)
    residual_ok = bool(res_r <= tol and res_l <= tol)
    return EigenTriple(v, x, y, sep, simple, residual_ok)


def eigentriples(P: HomMatrixPolynomial, refine: bool = True) -> list[EigenTriple]:
    """Eigenvalues of ``P`` (optionally refined) with their eigenvectors."""
    vals = eigenvalues(P)
    if refine:
        vals = [refine_eigenvalue(P, v) for v in vals]
    return [eigenvectors(P, v) for v in vals]


def chordal_distance(u: ProjPoint, v: ProjPoint) -> float:
    """Sine of the angle between the lines spanned by ``u`` and ``v``."""
    nu = np.hypot(abs(u.alpha), abs(u.beta))
    nv = np.hypot(abs(v.alpha), abs(v.beta))
    # rescale first so the cross product cannot overflow
    ua, ub = u.alpha / nu, u.beta / nu
    va, vb = v.alpha / nv, v.beta / nv
    return float(min(1.0, abs(ua * vb - ub * va)))


def match_eigenvalues(src: list[ProjPoint], dst: list[ProjPoint]):
    """Greedy minimum-chordal-distance matching.

    Returns
    -------
    pairs : list of (int, int)
        Index pairs ``(i, j)`` sorted by ``i``.
    max_dist : float
        Largest matched distance (0 for empty input).
    """
    if len(src) != len(dst):
        raise ValueError("eigenvalue lists must have equal length")
    m = len(src)
    if m == 0:
        return [], 0.0
    D = np.array([[chordal_distance(u, v) for v in dst] for u in src])
    pairs = []
    max_dist = 0.0
    for _ in range(m):
        i, j = np.unravel_index(np.argmin(D), D.shape)
        max_dist = max(max_dist, float(D[i, j]))
        pairs.append((int(i), int(j)))
        D[i, :] = np.inf
        D[:, j] = np.inf
    pairs.sort()
    return pairs, max_dist
