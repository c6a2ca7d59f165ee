"""Independent reference computations used by the tests.

Nothing here calls the package's quadrature or closed forms; each oracle
re-derives its quantity by brute force.
"""

import math
from functools import lru_cache

import numpy as np


def gauss_legendre(fn, lo, hi, n_nodes=1_000_000, panels=1000):
    """Composite Gauss-Legendre rule with ``n_nodes`` nodes split evenly over ``panels``."""
    per = n_nodes // panels
    x, w = np.polynomial.legendre.leggauss(per)
    edges = np.linspace(lo, hi, panels + 1)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (b - a) * x + 0.5 * (a + b)
    weights = 0.5 * (b - a) * w
    total = np.sum(fn(nodes) * weights)
    return complex(total) if np.iscomplexobj(total) else float(total)


def nu(t):
    return t**4 * (35 - 84 * t + 70 * t**2 - 20 * t**3)


def meyer_raw(w):
    w = np.asarray(w, dtype=float)
    out = np.zeros_like(w)
    a = (w > np.pi / 4) & (w <= np.pi / 2)
    b = (w > np.pi / 2) & (w <= np.pi)
    out[a] = np.sin(np.pi / 2 * nu(4 * w[a] / np.pi - 1))
    out[b] = np.cos(np.pi / 2 * nu(2 * w[b] / np.pi - 1))
    return out


def simoncelli_raw(w):
    w = np.asarray(w, dtype=float)
    out = np.zeros_like(w)
    m = (w > np.pi / 4) & (w <= np.pi)
    out[m] = np.cos(np.pi / 2 * np.log2(2 * w[m] / np.pi))
    return out


RAW = {"meyer": meyer_raw, "simoncelli": simoncelli_raw}


def _piecewise(fn, pieces):
    return sum(gauss_legendre(fn, a, b) for a, b in pieces)


@lru_cache(maxsize=None)
def moments(family, z):
    """``(b_z, d_z)`` of the unit-norm profile by composite Gauss-Legendre."""
    h = RAW[family]
    pieces = [(np.pi / 4, np.pi / 2), (np.pi / 2, np.pi)]
    energy = _piecewise(lambda w: h(w) ** 2 * w, pieces) / (2 * np.pi)
    b = _piecewise(lambda w: w**z * h(w) ** 2 * w, pieces) / (2 * np.pi) / energy
    d = gauss_legendre(lambda w: w**z * h(w) * h(2 * w) * w, np.pi / 4, np.pi / 2) / (2 * np.pi) / energy
    return b, d


@lru_cache(maxsize=None)
def meyer_norm2():
    pieces = [(np.pi / 4, np.pi / 2), (np.pi / 2, np.pi)]
    return 1.0 / (_piecewise(lambda w: meyer_raw(w) ** 2 * w, pieces) / (2 * np.pi))


def angular_coefficient_bruteforce(A, n, panels=4096, per=16):
    """``1/(2 pi) int A(phi) exp(-j n phi)`` by composite Gauss-Legendre on the circle."""
    x, w = np.polynomial.legendre.leggauss(per)
    edges = np.linspace(0.0, 2 * np.pi, panels + 1)
    a, b = edges[:-1, None], edges[1:, None]
    phi = (0.5 * (b - a) * x + 0.5 * (a + b)).ravel()
    wt = (0.5 * (b - a) * w).ravel()
    return np.sum(A(phi) * np.exp(-1j * n * phi) * wt) / (2 * np.pi)


def indicator_coefficient_bruteforce(freq, beta, n):
    """Exact lobe-by-lobe integration of ``|cos(freq phi)|**beta > 0.8``."""
    k = int(round(2 * freq))
    half = math.acos(0.8 ** (1 / beta)) / freq
    total = 0.0 + 0.0j
    for m in range(k):
        c = 2 * np.pi * m / k
        total += gauss_legendre(lambda p: np.exp(-1j * n * p), c - half, c + half, n_nodes=2000, panels=10)
    return total / (2 * np.pi)


def fisher_dense(dmu, C):
    """``2 Re(dmu^H C^{-1} dmu)`` with a plain dense solve."""
    return float(2 * np.real(np.conj(dmu) @ np.linalg.solve(C, dmu)))


def tridiagonal(l, B, D):
    return B * np.eye(l) + D * (np.eye(l, k=1) + np.eye(l, k=-1))


def random_wavelet_instance(rng):
    """Random grouping (g <= 5, l <= 6) with a complex table and feasible unit-B constants.

    Returns ``(table, constants, indices)``.
    """
    from steercrlb.patterns import HarmonicTable
    from steercrlb.radial import SpectralConstants

    g = int(rng.integers(1, 6))
    indices, entries, next_free = [], {}, {}
    for n in rng.choice(np.arange(1, 9), size=g, replace=True):
        n = int(n)
        start = next_free.get(n, int(rng.integers(-3, 2)))
        length = int(rng.integers(1, 7))
        for e in range(length):
            indices.append((n, start + e))
            entries[(n, start + e)] = complex(rng.standard_normal(), rng.standard_normal())
        next_free[n] = start + length + int(rng.integers(1, 3))
    D = float(rng.uniform(-0.49, 0.49))
    gamma = float(rng.uniform(0.0, 3.0))
    return HarmonicTable(entries, "random", "wavelet"), SpectralConstants(1.0, D, 1.0, D, gamma, 1.0), indices
