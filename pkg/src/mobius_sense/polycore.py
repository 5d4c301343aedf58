"""Homogeneous matrix polynomials: storage, evaluation, derivatives and norms.

A degree-``k`` polynomial is stored as its ``k + 1`` matrix coefficients, with
index ``i`` holding the coefficient of ``alpha**i * beta**(k - i)``.
"""
from __future__ import annotations

import enum
import json
from typing import Sequence

import numpy as np

from . import kernels

MAX_DEGREE = 30


class WeightScheme(enum.Enum):
    """Perturbation weights for condition numbers and backward errors."""

    ABSOLUTE = "a"
    POLYNORM = "p"
    COEFFICIENTWISE = "r"

    @classmethod
    def parse(cls, value) -> "WeightScheme":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {
            "a": cls.ABSOLUTE, "abs": cls.ABSOLUTE, "absolute": cls.ABSOLUTE,
            "p": cls.POLYNORM, "polynorm": cls.POLYNORM, "norm": cls.POLYNORM,
            "r": cls.COEFFICIENTWISE, "rel": cls.COEFFICIENTWISE,
            "relative": cls.COEFFICIENTWISE, "coefficientwise": cls.COEFFICIENTWISE,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown weight scheme {value!r}") from None


class HomMatrixPolynomial:
    """Immutable homogeneous matrix polynomial ``sum_i alpha^i beta^(k-i) B_i``.

    Parameters
    ----------
    coeffs : sequence of 2-D arrays or a 3-D array of shape (k+1, m, n)
        ``coeffs[i]`` is ``B_i``. Zero leading or trailing coefficients are
        allowed (the degree is stored, not inferred), but not all may vanish.
    """

    __slots__ = ("_coeffs", "_norms")

    def __init__(self, coeffs):
        try:
            arr = np.array(coeffs, dtype=complex)
        except (ValueError, TypeError):
            raise ValueError("coefficients must all be 2-D matrices of equal shape") from None
        if arr.ndim == 1:
            # scalar polynomial given as a list of numbers
            arr = arr.reshape(-1, 1, 1)
        if arr.ndim != 3:
            raise ValueError("coefficients must all be 2-D matrices of equal shape")
        if arr.shape[0] < 1 or arr.shape[1] < 1 or arr.shape[2] < 1:
            raise ValueError("empty coefficient list or empty matrices")
        if arr.shape[0] - 1 > MAX_DEGREE:
            raise ValueError(f"degree {arr.shape[0] - 1} exceeds the cap {MAX_DEGREE}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        if not np.any(arr):
            raise ValueError("all coefficients are zero: the degree is undefined")
        arr.setflags(write=False)
        self._coeffs = arr
        self._norms = None

    @classmethod
    def scalar(cls, values: Sequence[complex]) -> "HomMatrixPolynomial":
        """Scalar polynomial with ``values[i]`` multiplying ``alpha^i beta^(k-i)``."""
        return cls(np.asarray(values, dtype=complex).reshape(-1, 1, 1))

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def degree(self) -> int:
        return self._coeffs.shape[0] - 1

    k = degree

    @property
    def shape(self) -> tuple[int, int]:
        return self._coeffs.shape[1], self._coeffs.shape[2]

    @property
    def rows(self) -> int:
        return self._coeffs.shape[1]

    @property
    def cols(self) -> int:
        return self._coeffs.shape[2]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def coeff_norms(self) -> np.ndarray:
        """Spectral norms ``||B_i||_2``, cached."""
        if self._norms is None:
            norms = np.array([spectral_norm(B) for B in self._coeffs])
            norms.setflags(write=False)
            self._norms = norms
        return self._norms

    def __mul__(self, scalar):
        return HomMatrixPolynomial(self._coeffs * complex(scalar))

    __rmul__ = __mul__

    def __repr__(self):
        return f"HomMatrixPolynomial(k={self.degree}, shape={self.shape})"

    # serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        k = self.degree
        flat = self._coeffs.reshape(k + 1, -1)
        return {
            "k": k,
            "rows": self.rows,
            "cols": self.cols,
            "coeffs": [[[float(z.real), float(z.imag)] for z in row] for row in flat],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "HomMatrixPolynomial":
        try:
            k, rows, cols = int(doc["k"]), int(doc["rows"]), int(doc["cols"])
            raw = doc["coeffs"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed polynomial document: {exc}") from None
        if len(raw) != k + 1:
            raise ValueError(f"expected {k + 1} coefficients, got {len(raw)}")
        coeffs = np.empty((k + 1, rows, cols), dtype=complex)
        for i, entries in enumerate(raw):
            if len(entries) != rows * cols:
                raise ValueError(f"coefficient {i} has {len(entries)} entries, expected {rows * cols}")
            vals = np.array([complex(re, im) for re, im in entries])
            coeffs[i] = vals.reshape(rows, cols)
        return cls(coeffs)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "HomMatrixPolynomial":
        return cls.from_dict(json.loads(text))


def _point(pt) -> tuple[complex, complex]:
    alpha, beta = (complex(pt.alpha), complex(pt.beta)) if hasattr(pt, "alpha") else map(complex, pt)
    if alpha == 0 and beta == 0:
        raise ValueError("(0, 0) is not a point of the projective line")
    return alpha, beta


def _eval_coeffs(coeffs: np.ndarray, alpha: complex, beta: complex) -> np.ndarray:
    kp1, m, n = coeffs.shape
    flat = np.ascontiguousarray(coeffs.reshape(kp1, m * n))
    return np.asarray(kernels.horner_hom(flat, alpha, beta)).reshape(m, n)


def evaluate(P: HomMatrixPolynomial, pt) -> np.ndarray:
    """Evaluate ``P`` at a nonzero point ``pt = (alpha, beta)``."""
    alpha, beta = _point(pt)
    return _eval_coeffs(P.coeffs, alpha, beta)


def eval_d_alpha(P: HomMatrixPolynomial, pt) -> np.ndarray:
    """Partial derivative with respect to ``alpha`` evaluated at ``pt``."""
    alpha, beta = _point(pt)
    k = P.degree
    if k == 0:
        return np.zeros(P.shape, dtype=complex)
    scale = np.arange(1, k + 1).reshape(-1, 1, 1)
    return _eval_coeffs(P.coeffs[1:] * scale, alpha, beta)


def eval_d_beta(P: HomMatrixPolynomial, pt) -> np.ndarray:
    """Partial derivative with respect to ``beta`` evaluated at ``pt``."""
    alpha, beta = _point(pt)
    k = P.degree
    if k == 0:
        return np.zeros(P.shape, dtype=complex)
    scale = np.arange(k, 0, -1).reshape(-1, 1, 1)
    return _eval_coeffs(P.coeffs[:-1] * scale, alpha, beta)


def spectral_norm(M) -> float:
    """Largest singular value of ``M``."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def poly_inf_norm(P: HomMatrixPolynomial) -> float:
    """``max_i ||B_i||_2``."""
    return float(P.coeff_norms().max())


def weights_of(scheme, P: HomMatrixPolynomial) -> np.ndarray:
    """Weights ``omega_0..omega_k`` of ``P`` under ``scheme``."""
    scheme = WeightScheme.parse(scheme)
    k = P.degree
    if scheme is WeightScheme.ABSOLUTE:
        return np.ones(k + 1)
    if scheme is WeightScheme.POLYNORM:
        return np.full(k + 1, poly_inf_norm(P))
    return np.array(P.coeff_norms(), dtype=float)


def weighted_power_sum(pt, weights) -> float:
    """``sum_i |alpha|^i |beta|^(k-i) omega_i`` at ``pt``."""
    alpha, beta = _point(pt)
    w = np.ascontiguousarray(weights, dtype=float)
    return float(kernels.abs_power_sum(abs(alpha), abs(beta), w))
