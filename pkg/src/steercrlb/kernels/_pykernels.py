"""Pure-Python reference implementation of the estimator kernels."""

import math

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def response(ns, re, im, theta):
    """``sum re cos(n theta) + im sin(n theta)``."""
    total = 0.0
    for k in range(len(ns)):
        a = ns[k] * theta
        total += re[k] * math.cos(a) + im[k] * math.sin(a)
    return total


def grid_argmax(ns, re, im, period, n_grid):
    best = -math.inf
    best_j = 0
    step = period / n_grid
    for j in range(n_grid):
        v = response(ns, re, im, j * step)
        if v > best:
            best = v
            best_j = j
    return best_j * step


def golden_max(ns, re, im, lo, hi, tol):
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = response(ns, re, im, c)
    fd = response(ns, re, im, d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = response(ns, re, im, c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = response(ns, re, im, d)
    return 0.5 * (a + b)


def maximize_response(ns, re, im, period, n_grid, tol):
    """Grid search over ``[0, period)`` followed by golden-section refinement."""
    ns = np.ascontiguousarray(ns, dtype=np.int64)
    re = np.ascontiguousarray(re, dtype=np.float64)
    im = np.ascontiguousarray(im, dtype=np.float64)
    step = period / n_grid
    t0 = grid_argmax(ns, re, im, period, n_grid)
    return golden_max(ns, re, im, t0 - step, t0 + step, tol)
