# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the functions in ``_pykernels``."""

import numpy as np

from libc.math cimport exp


cpdef object homog_eval(list coeffs, object num, object den):
    cdef Py_ssize_t n = len(coeffs)
    cdef Py_ssize_t i
    cdef object acc, dpow, c
    if n == 0:
        return 0
    acc = coeffs[n - 1]
    if den == 1:
        for i in range(n - 2, -1, -1):
            acc = acc * num + <object>coeffs[i]
        return acc
    dpow = 1
    for i in range(n - 2, -1, -1):
        dpow = dpow * den
        c = coeffs[i]
        acc = acc * num
        if c:
            acc = acc + c * dpow
    return acc


def sign_variations(values):
    cdef int count = 0
    cdef int last = 0
    cdef int s
    for v in values:
        if v > 0:
            s = 1
        elif v < 0:
            s = -1
        else:
            continue
        if last != 0 and s != last:
            count += 1
        last = s
    return count


def chain_variations(list chain, object num, object den):
    cdef int count = 0
    cdef int last = 0
    cdef int s
    cdef object v
    for p in chain:
        v = homog_eval(p, num, den)
        if v > 0:
            s = 1
        elif v < 0:
            s = -1
        else:
            continue
        if last != 0 and s != last:
            count += 1
        last = s
    return count


def npv_grid(times, amounts, s_values):
    cdef double[::1] s = np.ascontiguousarray(s_values, dtype=np.float64)
    cdef double[::1] t = np.ascontiguousarray(times, dtype=np.float64)
    cdef double[::1] a = np.ascontiguousarray(amounts, dtype=np.float64)
    cdef Py_ssize_t m = s.shape[0]
    cdef Py_ssize_t k = t.shape[0]
    out = np.zeros(m, dtype=np.float64)
    cdef double[::1] acc = out
    cdef Py_ssize_t i, j
    cdef double si, total
    for i in range(m):
        si = s[i]
        total = 0.0
        for j in range(k):
            total += a[j] * exp(-si * t[j])
        acc[i] = total
    return out
