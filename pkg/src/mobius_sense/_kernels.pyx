# cython: language_level=3
"""Compiled versions of the hot kernels (see ``_kernels_py`` for semantics)."""
import numpy as np


def mobius_coeff_matrix(double complex a, double complex b, double complex c,
                        double complex d, int k, const long long[:, :] binom_table):
    cdef Py_ssize_t ell, i, j, jlo, jhi, e
    cdef double complex acc
    cdef double coef
    apow_np = np.empty(k + 1, dtype=np.complex128)
    bpow_np = np.empty(k + 1, dtype=np.complex128)
    cpow_np = np.empty(k + 1, dtype=np.complex128)
    dpow_np = np.empty(k + 1, dtype=np.complex128)
    cdef double complex[:] apow = apow_np
    cdef double complex[:] bpow = bpow_np
    cdef double complex[:] cpow = cpow_np
    cdef double complex[:] dpow = dpow_np
    apow[0] = 1
    bpow[0] = 1
    cpow[0] = 1
    dpow[0] = 1
    for e in range(1, k + 1):
        apow[e] = apow[e - 1] * a
        bpow[e] = bpow[e - 1] * b
        cpow[e] = cpow[e - 1] * c
        dpow[e] = dpow[e - 1] * d
    T_np = np.zeros((k + 1, k + 1), dtype=np.complex128)
    cdef double complex[:, :] T = T_np
    for ell in range(k + 1):
        for i in range(k + 1):
            acc = 0
            jlo = i - ell if i - ell > 0 else 0
            jhi = i if i < k - ell else k - ell
            for j in range(jlo, jhi + 1):
                coef = <double>(binom_table[i, j] * binom_table[k - i, k - j - ell])
                acc = acc + coef * apow[i - j] * bpow[j] * cpow[j + ell - i] * dpow[k - j - ell]
            T[ell, i] = acc
    return T_np


cdef void _horner_pass(const double complex[:, :] coeffs, double complex[:] out,
                       Py_ssize_t first, Py_ssize_t step, Py_ssize_t count,
                       double tr, double ti) noexcept nogil:
    # out <- out * t + coeffs[i] over count rows; real arithmetic avoids __muldc3
    cdef Py_ssize_t i, r, m
    cdef Py_ssize_t N = out.shape[0]
    cdef double xr, xi
    i = first
    for r in range(count):
        for m in range(N):
            xr = out[m].real
            xi = out[m].imag
            out[m] = (xr * tr - xi * ti + coeffs[i, m].real) + 1j * (xr * ti + xi * tr + coeffs[i, m].imag)
        i += step


def horner_hom(const double complex[:, :] coeffs, double complex alpha, double complex beta):
    cdef Py_ssize_t k = coeffs.shape[0] - 1
    cdef Py_ssize_t N = coeffs.shape[1]
    cdef Py_ssize_t m
    cdef double complex t, scale
    out_np = np.empty(N, dtype=np.complex128)
    cdef double complex[:] out = out_np
    if abs(beta) >= abs(alpha):
        t = alpha / beta
        scale = beta ** k
        for m in range(N):
            out[m] = coeffs[k, m]
        _horner_pass(coeffs, out, k - 1, -1, k, t.real, t.imag)
    else:
        t = beta / alpha
        scale = alpha ** k
        for m in range(N):
            out[m] = coeffs[0, m]
        _horner_pass(coeffs, out, 1, 1, k, t.real, t.imag)
    for m in range(N):
        out[m] = out[m] * scale
    return out_np


def abs_power_sum(double x, double y, const double[:] weights):
    cdef Py_ssize_t k = weights.shape[0] - 1
    cdef Py_ssize_t i
    cdef double t, acc
    if y >= x:
        t = x / y
        acc = weights[k]
        for i in range(k - 1, -1, -1):
            acc = acc * t + weights[i]
        return acc * y ** k
    t = y / x
    acc = weights[0]
    for i in range(1, k + 1):
        acc = acc * t + weights[i]
    return acc * x ** k
