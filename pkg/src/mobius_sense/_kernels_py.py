"""Pure-Python versions of the hot kernels.

Same signatures and semantics as the compiled ``_kernels`` module; used when
the extension is unavailable or ``MOBIUS_SENSE_PURE=1`` is set.
"""
import numpy as np


def mobius_coeff_matrix(a, b, c, d, k, binom_table):
    """Scalar mixing matrix T with B~_l = sum_i T[l, i] B_i.

    ``binom_table[s, t]`` must hold C(s, t) for 0 <= t <= s <= k.
    """
    a, b, c, d = complex(a), complex(b), complex(c), complex(d)
    apow = [a**e for e in range(k + 1)]
    bpow = [b**e for e in range(k + 1)]
    cpow = [c**e for e in range(k + 1)]
    dpow = [d**e for e in range(k + 1)]
    T = np.zeros((k + 1, k + 1), dtype=complex)
    for ell in range(k + 1):
        for i in range(k + 1):
            acc = 0j
            # C(i, j) needs j <= i; C(k-i, k-j-ell) needs j >= i - ell
            for j in range(max(0, i - ell), min(i, k - ell) + 1):
                coef = binom_table[i, j] * binom_table[k - i, k - j - ell]
                acc += coef * apow[i - j] * bpow[j] * cpow[j + ell - i] * dpow[k - j - ell]
            T[ell, i] = acc
    return T


def horner_hom(coeffs, alpha, beta):
    """Evaluate sum_i alpha^i beta^(k-i) coeffs[i] for a (k+1, N) array."""
    alpha, beta = complex(alpha), complex(beta)
    k = coeffs.shape[0] - 1
    if abs(beta) >= abs(alpha):
        t = alpha / beta
        acc = coeffs[k].astype(complex, copy=True)
        for i in range(k - 1, -1, -1):
            acc = acc * t + coeffs[i]
        return acc * beta**k
    u = beta / alpha
    acc = coeffs[0].astype(complex, copy=True)
    for i in range(1, k + 1):
        acc = acc * u + coeffs[i]
    return acc * alpha**k


def abs_power_sum(x, y, weights):
    """sum_i x^i y^(k-i) w_i for nonnegative x, y (not both zero)."""
    k = len(weights) - 1
    x, y = float(x), float(y)
    if y >= x:
        t = x / y
        acc = float(weights[k])
        for i in range(k - 1, -1, -1):
            acc = acc * t + weights[i]
        return acc * y**k
    u = y / x
    acc = float(weights[0])
    for i in range(1, k + 1):
        acc = acc * u + weights[i]
    return acc * x**k
