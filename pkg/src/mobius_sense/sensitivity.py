"""Condition numbers, backward errors and their quotients under Mobius transforms.

All quantities are invariant under rescaling the eigenvalue representative.
Vanishing denominators produce ``inf`` instead of raising, so experiment
campaigns can record and skip such rows.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .eigensolve import EigenTriple, eigentriples, eigenvectors
from .mobius import Mobius2x2, ProjPoint, binom, map_eigenvalue, mobius_transform, push_eigenvalue
from .polycore import (
    HomMatrixPolynomial,
    WeightScheme,
    eval_d_alpha,
    eval_d_beta,
    evaluate,
    poly_inf_norm,
    weighted_power_sum,
    weights_of,
)

TINY = 1e-300


class QuotientKind(enum.Enum):
    COND = "cond"
    BACKWARD_RIGHT = "backward_right"
    BACKWARD_LEFT = "backward_left"


def S_k(k: int) -> float:
    return 4.0 * (k + 1)


def Z_k(k: int) -> float:
    return 4.0 * (k + 1) ** 2 * binom(k, k // 2)


def Y_k(k: int) -> float:
    return float((k + 1) ** 2 * binom(k, k // 2))


def _weights(scheme, P, weights):
    return weights_of(scheme, P) if weights is None else np.asarray(weights, dtype=float)


# condition numbers and backward errors ---------------------------------------


def cond_at(P: HomMatrixPolynomial, rep: ProjPoint, x, y, scheme, weights=None) -> float:
    """Condition number at representative ``rep`` with eigenvectors ``x``, ``y``."""
    w = _weights(scheme, P, weights)
    num = weighted_power_sum(rep, w)
    if num < TINY:
        return math.inf
    x = np.asarray(x)
    y = np.asarray(y)
    a, b = rep.alpha, rep.beta
    M = np.conj(b) * eval_d_alpha(P, rep) - np.conj(a) * eval_d_beta(P, rep)
    den = abs(np.conj(y) @ M @ x)
    if den < TINY:
        return math.inf
    return float(num * np.linalg.norm(x) * np.linalg.norm(y) / den)


def cond_stewart_sun(P: HomMatrixPolynomial, triple: EigenTriple, scheme, weights=None) -> float:
    """Chordal eigenvalue condition number of a simple eigenvalue.

    Parameters
    ----------
    P : HomMatrixPolynomial
    triple : EigenTriple
        Eigenvalue with right/left eigenvectors of ``P``.
    scheme : WeightScheme or str
    weights : array_like, optional
        Explicit weights overriding ``scheme``.
    """
    return cond_at(P, triple.value, triple.x, triple.y, scheme, weights)


def backward_error(P: HomMatrixPolynomial, vec, side: str, approx: ProjPoint, scheme,
                   weights=None) -> float:
    """Backward error of an approximate right (``P x = 0``) or left (``y^* P = 0``) eigenpair."""
    vec = np.asarray(vec, dtype=complex)
    nv = np.linalg.norm(vec)
    if nv == 0:
        raise ValueError("eigenvector approximation must be nonzero")
    M = evaluate(P, approx)
    if side == "right":
        res = np.linalg.norm(M @ vec)
    elif side == "left":
        res = np.linalg.norm(np.conj(vec) @ M)
    else:
        raise ValueError("side must be 'right' or 'left'")
    den = weighted_power_sum(approx, _weights(scheme, P, weights))
    if den < TINY:
        return math.inf
    return float(res / (den * nv))


# quotients ---------------------------------------------------------------------


def quotient_exact(A: Mobius2x2, P: HomMatrixPolynomial, P_tilde: HomMatrixPolynomial,
                   rep: ProjPoint, scheme) -> float:
    """Closed-form ratio ``kappa(M_A(P), A^{-1} rep) / kappa(P, rep)``."""
    mapped = map_eigenvalue(A, rep)
    num = weighted_power_sum(mapped, weights_of(scheme, P_tilde))
    den = abs(A.det) * weighted_power_sum(rep, weights_of(scheme, P))
    if den < TINY:
        return math.inf
    ratio = (abs(rep.alpha) ** 2 + abs(rep.beta) ** 2) / (abs(mapped.alpha) ** 2 + abs(mapped.beta) ** 2)
    return float(num / den * ratio)


def quotient_backward(A: Mobius2x2, P: HomMatrixPolynomial, P_tilde: HomMatrixPolynomial,
                      rep_hat: ProjPoint, scheme) -> float:
    """Closed-form ratio ``eta(P) / eta(M_A(P))`` for an approximate eigenpair of ``M_A(P)``.

    The same value applies to right and left eigenpairs.
    """
    pushed = push_eigenvalue(A, rep_hat)
    num = weighted_power_sum(rep_hat, weights_of(scheme, P_tilde))
    den = weighted_power_sum(pushed, weights_of(scheme, P))
    if den < TINY:
        return math.inf
    return float(num / den)


def rho_factors(P: HomMatrixPolynomial) -> tuple[float, bool]:
    """``max_i ||B_i|| / min(||B_0||, ||B_k||)`` and whether it is defined."""
    norms = P.coeff_norms()
    low = min(norms[0], norms[-1])
    if low < TINY:
        return math.inf, False
    return float(norms.max() / low), True


# bounds ----------------------------------------------------------------------------


def _coefficientwise(lo: float, hi: float, P, P_tilde) -> tuple[float, float]:
    rho, ok = rho_factors(P)
    rho_t, ok_t = rho_factors(P_tilde)
    if not (ok and ok_t):
        return math.nan, math.nan
    return lo / rho_t, hi * rho


def bounds_cond(A: Mobius2x2, P: HomMatrixPolynomial, P_tilde: HomMatrixPolynomial,
                scheme) -> tuple[float, float]:
    """Eigenvalue-independent bounds on the condition-number quotient.

    Coefficientwise bounds are ``(nan, nan)`` when an extreme coefficient of
    ``P`` or ``M_A(P)`` vanishes.
    """
    scheme = WeightScheme.parse(scheme)
    k = P.degree
    if scheme is WeightScheme.ABSOLUTE:
        if k == 1:
            return 1.0 / (2.0 * A.norm_inf), 2.0 * A.inv_norm_inf
        return (A.inv_norm_inf / (S_k(k) * A.norm_inf ** (k - 1)),
                S_k(k) * A.inv_norm_inf ** (k - 1) / A.norm_inf)
    c = A.cond_inf
    if k == 1:
        lo, hi = 1.0 / (4.0 * c), 4.0 * c
    else:
        lo, hi = 1.0 / (Z_k(k) * c ** (k - 1)), Z_k(k) * c ** (k - 1)
    if scheme is WeightScheme.POLYNORM:
        return lo, hi
    return _coefficientwise(lo, hi, P, P_tilde)


def bounds_cond_sharp(A: Mobius2x2, rep: ProjPoint, k: int, P: HomMatrixPolynomial,
                      P_tilde: HomMatrixPolynomial, scheme) -> tuple[float, float]:
    """Eigenvalue-dependent bounds on the condition-number quotient."""
    scheme = WeightScheme.parse(scheme)
    mapped = map_eigenvalue(A, rep)
    det = abs(A.det)
    if k == 1:
        r1 = rep.norm(1) / mapped.norm(1)
        lo, hi = 0.5 * r1 / det, 2.0 * r1 / det
    else:
        rinf = mapped.norm(np.inf) / rep.norm(np.inf)
        f = rinf ** (k - 2) / det
        lo, hi = f / (2.0 * (k + 1)), 2.0 * (k + 1) * f
    if scheme is WeightScheme.ABSOLUTE:
        return lo, hi
    ratio = poly_inf_norm(P_tilde) / poly_inf_norm(P)
    lo, hi = lo * ratio, hi * ratio
    if scheme is WeightScheme.POLYNORM:
        return lo, hi
    return _coefficientwise(lo, hi, P, P_tilde)


def bounds_backward(A: Mobius2x2, P: HomMatrixPolynomial, P_tilde: HomMatrixPolynomial,
                    scheme) -> tuple[float, float]:
    """Eigenvalue-independent bounds on the backward-error quotient."""
    scheme = WeightScheme.parse(scheme)
    k = P.degree
    if scheme is WeightScheme.ABSOLUTE:
        return 1.0 / ((k + 1) * A.norm_inf ** k), (k + 1) * A.inv_norm_inf ** k
    c = A.cond_inf
    lo, hi = 1.0 / (Y_k(k) * c ** k), Y_k(k) * c ** k
    if scheme is WeightScheme.POLYNORM:
        return lo, hi
    return _coefficientwise(lo, hi, P, P_tilde)


def bounds_backward_sharp(A: Mobius2x2, rep_hat: ProjPoint, k: int, P: HomMatrixPolynomial,
                          P_tilde: HomMatrixPolynomial, scheme) -> tuple[float, float]:
    """Eigenvalue-dependent bounds on the backward-error quotient.

    With ``r = ||rep_hat||_inf / ||A rep_hat||_inf`` the absolute quotient lies in
    ``[r^k / (k+1), (k+1) r^k]``; the other schemes follow as for condition numbers.
    """
    scheme = WeightScheme.parse(scheme)
    pushed = push_eigenvalue(A, rep_hat)
    r = rep_hat.norm(np.inf) / pushed.norm(np.inf)
    lo, hi = r**k / (k + 1), (k + 1) * r**k
    if scheme is WeightScheme.ABSOLUTE:
        return lo, hi
    ratio = poly_inf_norm(P_tilde) / poly_inf_norm(P)
    lo, hi = lo * ratio, hi * ratio
    if scheme is WeightScheme.POLYNORM:
        return lo, hi
    return _coefficientwise(lo, hi, P, P_tilde)


def illcond_profile(A: Mobius2x2, rep: ProjPoint, k: int, P: HomMatrixPolynomial,
                    P_tilde: HomMatrixPolynomial) -> dict[str, float]:
    """Predictors of the absolute and norm-relative quotients with degree factors dropped."""
    mapped = map_eigenvalue(A, rep)
    det = abs(A.det)
    if k == 1:
        a = rep.norm(1) / mapped.norm(1) / det
    else:
        a = (mapped.norm(np.inf) / rep.norm(np.inf)) ** (k - 2) / det
    return {"a": a, "p": a * poly_inf_norm(P_tilde) / poly_inf_norm(P)}


# records -------------------------------------------------------------------------


@dataclass
class SensitivityRecord:
    """Per-eigenvalue sensitivity data for one ``(P, A)`` pair.

    For backward-error records ``kappa_P`` and ``kappa_MAP`` hold the backward
    errors of the pair for ``P`` and ``M_A(P)``, ``eigenvalue`` is the pushed
    point ``A rep_hat`` and ``mapped`` the approximate eigenvalue ``rep_hat``.
    """

    eigenvalue: ProjPoint
    mapped: ProjPoint
    scheme: WeightScheme
    kappa_P: float
    kappa_MAP: float
    q_exact: float
    q_direct: float
    lower: float
    upper: float
    lower_sharp: float
    upper_sharp: float
    rho: float
    rho_tilde: float
    cond_inf_A: float
    det_abs: float
    S_k: float
    Z_k: float
    Y_k: float
    simple_flag: bool
    kind: QuotientKind = field(default=QuotientKind.COND)

    @property
    def finite(self) -> bool:
        vals = (self.kappa_P, self.kappa_MAP, self.q_exact, self.lower, self.upper,
                self.lower_sharp, self.upper_sharp)
        return all(math.isfinite(v) for v in vals)

    def sandwich_ok(self, rel: float = 1e-12) -> bool:
        """Bound ordering; sharp-vs-plain comparisons use a ``rel * upper`` slack."""
        eps = rel * self.upper
        return (self.lower <= self.q_exact <= self.upper
                and self.lower_sharp <= self.q_exact <= self.upper_sharp
                and self.lower_sharp >= self.lower - eps
                and self.upper_sharp <= self.upper + eps)


def _common(A, P, P_tilde):
    k = P.degree
    return dict(
        rho=rho_factors(P)[0],
        rho_tilde=rho_factors(P_tilde)[0],
        cond_inf_A=A.cond_inf,
        det_abs=abs(A.det),
        S_k=S_k(k),
        Z_k=Z_k(k),
        Y_k=Y_k(k),
    )


def condition_record(A: Mobius2x2, P: HomMatrixPolynomial, P_tilde: HomMatrixPolynomial,
                     triple: EigenTriple, scheme) -> SensitivityRecord:
    """Condition-number quotient record for one eigenvalue of ``P``."""
    scheme = WeightScheme.parse(scheme)
    rep = triple.value
    mapped = map_eigenvalue(A, rep).normalized()
    triple_t = eigenvectors(P_tilde, mapped)
    kp = cond_stewart_sun(P, triple, scheme)
    km = cond_stewart_sun(P_tilde, triple_t, scheme)
    q_direct = km / kp if kp > 0 and math.isfinite(kp) else math.inf
    lo, hi = bounds_cond(A, P, P_tilde, scheme)
    los, his = bounds_cond_sharp(A, rep, P.degree, P, P_tilde, scheme)
    return SensitivityRecord(
        eigenvalue=rep, mapped=mapped, scheme=scheme,
        kappa_P=kp, kappa_MAP=km,
        q_exact=quotient_exact(A, P, P_tilde, rep, scheme), q_direct=q_direct,
        lower=lo, upper=hi, lower_sharp=los, upper_sharp=his,
        # an infinite condition number (zero weight sum) is reported but flagged
        simple_flag=not triple.flagged and math.isfinite(kp) and math.isfinite(km),
        kind=QuotientKind.COND,
        **_common(A, P, P_tilde),
    )


def backward_record(A: Mobius2x2, P: HomMatrixPolynomial, P_tilde: HomMatrixPolynomial,
                    approx: EigenTriple, scheme, side: str = "right") -> SensitivityRecord:
    """Backward-error quotient record for an approximate eigenpair of ``M_A(P)``."""
    scheme = WeightScheme.parse(scheme)
    rep_hat = approx.value
    pushed = push_eigenvalue(A, rep_hat).normalized()
    vec = approx.x if side == "right" else approx.y
    eta_p = backward_error(P, vec, side, pushed, scheme)
    eta_t = backward_error(P_tilde, vec, side, rep_hat, scheme)
    q_direct = eta_p / eta_t if eta_t > 0 else math.nan
    lo, hi = bounds_backward(A, P, P_tilde, scheme)
    los, his = bounds_backward_sharp(A, rep_hat, P.degree, P, P_tilde, scheme)
    kind = QuotientKind.BACKWARD_RIGHT if side == "right" else QuotientKind.BACKWARD_LEFT
    return SensitivityRecord(
        eigenvalue=pushed, mapped=rep_hat, scheme=scheme,
        kappa_P=eta_p, kappa_MAP=eta_t,
        q_exact=quotient_backward(A, P, P_tilde, rep_hat, scheme), q_direct=q_direct,
        lower=lo, upper=hi, lower_sharp=los, upper_sharp=his,
        simple_flag=not approx.flagged and math.isfinite(eta_p) and math.isfinite(eta_t),
        kind=kind,
        **_common(A, P, P_tilde),
    )


def analyze(A: Mobius2x2, P: HomMatrixPolynomial, scheme,
            P_tilde: HomMatrixPolynomial | None = None) -> list[SensitivityRecord]:
    """Condition-number records for every eigenvalue of ``P``."""
    if P_tilde is None:
        P_tilde = mobius_transform(A, P)
    return [condition_record(A, P, P_tilde, t, scheme) for t in eigentriples(P)]


def analyze_backward(A: Mobius2x2, P: HomMatrixPolynomial, scheme,
                     P_tilde: HomMatrixPolynomial | None = None,
                     side: str = "right") -> list[SensitivityRecord]:
    """Backward-error records for the computed eigenpairs of ``M_A(P)``."""
    if P_tilde is None:
        P_tilde = mobius_transform(A, P)
    return [backward_record(A, P, P_tilde, t, scheme, side)
            for t in eigentriples(P_tilde, refine=False)]
