"""Pure-Python implementations of the hot kernels.

These are the reference versions; ``_ckernels.pyx`` mirrors every function
here with the same signature and semantics.
"""

import numpy as np


def homog_eval(coeffs, num, den):
    """Return ``sum(c_i * num**i * den**(n - i))`` for ascending ``coeffs``.

    For ``den > 0`` the sign of the result is the sign of the polynomial at
    ``num / den``; no fractions are formed.
    """
    n = len(coeffs)
    if n == 0:
        return 0
    acc = coeffs[n - 1]
    if den == 1:
        for i in range(n - 2, -1, -1):
            acc = acc * num + coeffs[i]
        return acc
    dpow = 1
    for i in range(n - 2, -1, -1):
        dpow *= den
        c = coeffs[i]
        acc = acc * num
        if c:
            acc += c * dpow
    return acc


def sign_variations(values):
    """Count sign changes in a sequence, skipping zeros."""
    count = 0
    last = 0
    for v in values:
        if v > 0:
            s = 1
        elif v < 0:
            s = -1
        else:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def chain_variations(chain, num, den):
    """Sign variations of a polynomial chain evaluated at ``num / den``."""
    count = 0
    last = 0
    for p in chain:
        v = homog_eval(p, num, den)
        if v > 0:
            s = 1
        elif v < 0:
            s = -1
        else:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def npv_grid(times, amounts, s_values):
    """Evaluate ``sum_k a_k * exp(-s * t_k)`` on a grid of rates.

    Terms are accumulated in the given (ascending-time) order so that the
    result does not depend on a BLAS reduction order.
    """
    s = np.ascontiguousarray(s_values, dtype=np.float64)
    acc = np.zeros_like(s)
    with np.errstate(over="ignore", invalid="ignore"):
        for t, a in zip(times, amounts):
            acc += a * np.exp(-s * t)
    return acc
