"""Steered matched-filter estimation of the rotation angle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Optional

import numpy as np

from . import kernels
from .errors import DegenerateTemplate
from .filterbank import _steer_terms

N_GRID = 1024
TOLERANCE = 1e-7


@dataclass(frozen=True)
class AngleEstimate:
    theta_hat: float
    symmetry_order: int
    wrapped_error: Optional[float] = None


def angular_error(theta_hat: float, theta_star: float, k: int = 1) -> float:
    """Signed error modulo ``2 pi/k`` in the half-open interval ``(-pi/k, pi/k]``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    period = 2.0 * math.pi / k
    half = math.pi / k
    return -(((theta_star - theta_hat) + half) % period - half)


def informative_order(c) -> int:
    """gcd of harmonics carrying a nonzero template coefficient (0 if none)."""
    entries = c.entries if hasattr(c, "entries") else dict(c)
    ns = [abs(k if np.ndim(k) == 0 else k[0]) for k, v in entries.items() if v != 0]
    ns = [int(n) for n in ns if n != 0]
    return reduce(math.gcd, ns, 0)


def estimate_angle(q, c, k: Optional[int] = None, theta_star: Optional[float] = None,
                   n_grid: int = N_GRID, tol: float = TOLERANCE) -> AngleEstimate:
    """Maximize the steered response over one period of the template.

    The search runs over ``[0, 2 pi/m)`` with ``m`` the gcd of the
    informative harmonics, where the response is exactly periodic. A
    template with a single informative harmonic is solved in closed form.
    The estimate is reported modulo ``2 pi/k`` (``k`` defaults to ``m``).
    """
    ns, w, prod = _steer_terms(q, c)
    mask = (ns != 0) & (prod != 0)
    m = informative_order({int(n): 1.0 for n in ns[mask]})
    if m == 0:
        raise DegenerateTemplate("all informative template coefficients vanish")
    k = m if k is None else int(k)
    if k < 1:
        raise ValueError("k must be >= 1")
    period = 2.0 * math.pi / m
    ns, w, prod = ns[mask], w[mask], prod[mask]
    distinct = np.unique(np.abs(ns))
    if distinct.size == 1:
        n = int(distinct[0])
        # all terms reduce to one phasor in exp(-j n theta)
        z = np.sum(np.where(ns > 0, w * prod, w * np.conj(prod)))
        theta = (math.atan2(z.imag, z.real) / n) % period
    else:
        re = w * prod.real
        im = w * prod.imag
        theta = kernels.maximize_response(ns.astype(np.int64), re, im, period, int(n_grid), float(tol)) % period
    theta_hat = theta % (2.0 * math.pi / k)
    err = None if theta_star is None else angular_error(theta_hat, theta_star, k)
    return AngleEstimate(float(theta_hat), k, err)
