# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled estimator kernels; same contract as the pure-Python module."""

import numpy as np
from libc.math cimport cos, sin, sqrt, INFINITY

cdef double _INVPHI = (sqrt(5.0) - 1.0) / 2.0


cdef double _response(const long long[::1] ns, const double[::1] re, const double[::1] im,
                      double theta) noexcept nogil:
    cdef double total = 0.0
    cdef double a
    cdef Py_ssize_t k
    for k in range(ns.shape[0]):
        a = ns[k] * theta
        total += re[k] * cos(a) + im[k] * sin(a)
    return total


def response(ns, re, im, double theta):
    cdef const long long[::1] n_ = np.ascontiguousarray(ns, dtype=np.int64)
    cdef const double[::1] r_ = np.ascontiguousarray(re, dtype=np.float64)
    cdef const double[::1] i_ = np.ascontiguousarray(im, dtype=np.float64)
    return _response(n_, r_, i_, theta)


cdef double _grid_argmax(const long long[::1] ns, const double[::1] re, const double[::1] im,
                         double period, Py_ssize_t n_grid) noexcept nogil:
    cdef double best = -INFINITY
    cdef Py_ssize_t best_j = 0
    cdef Py_ssize_t j
    cdef double step = period / n_grid
    cdef double v
    for j in range(n_grid):
        v = _response(ns, re, im, j * step)
        if v > best:
            best = v
            best_j = j
    return best_j * step


cdef double _golden_max(const long long[::1] ns, const double[::1] re, const double[::1] im,
                        double lo, double hi, double tol) noexcept nogil:
    cdef double a = lo
    cdef double b = hi
    cdef double c = b - _INVPHI * (b - a)
    cdef double d = a + _INVPHI * (b - a)
    cdef double fc = _response(ns, re, im, c)
    cdef double fd = _response(ns, re, im, d)
    while b - a > tol:
        if fc > fd:
            b = d
            d = c
            fd = fc
            c = b - _INVPHI * (b - a)
            fc = _response(ns, re, im, c)
        else:
            a = c
            c = d
            fc = fd
            d = a + _INVPHI * (b - a)
            fd = _response(ns, re, im, d)
    return 0.5 * (a + b)


def grid_argmax(ns, re, im, double period, Py_ssize_t n_grid):
    cdef const long long[::1] n_ = np.ascontiguousarray(ns, dtype=np.int64)
    cdef const double[::1] r_ = np.ascontiguousarray(re, dtype=np.float64)
    cdef const double[::1] i_ = np.ascontiguousarray(im, dtype=np.float64)
    return _grid_argmax(n_, r_, i_, period, n_grid)


def golden_max(ns, re, im, double lo, double hi, double tol):
    cdef const long long[::1] n_ = np.ascontiguousarray(ns, dtype=np.int64)
    cdef const double[::1] r_ = np.ascontiguousarray(re, dtype=np.float64)
    cdef const double[::1] i_ = np.ascontiguousarray(im, dtype=np.float64)
    return _golden_max(n_, r_, i_, lo, hi, tol)


def maximize_response(ns, re, im, double period, Py_ssize_t n_grid, double tol):
    """Grid search over ``[0, period)`` followed by golden-section refinement."""
    cdef const long long[::1] n_ = np.ascontiguousarray(ns, dtype=np.int64)
    cdef const double[::1] r_ = np.ascontiguousarray(re, dtype=np.float64)
    cdef const double[::1] i_ = np.ascontiguousarray(im, dtype=np.float64)
    cdef double step = period / n_grid
    cdef double t0
    with nogil:
        t0 = _grid_argmax(n_, r_, i_, period, n_grid)
        t0 = _golden_max(n_, r_, i_, t0 - step, t0 + step, tol)
    return t0
