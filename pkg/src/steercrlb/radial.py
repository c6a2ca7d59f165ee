"""Radial frequency profiles and the spectral integrals built on them.

A profile is the isotropic factor ``h(omega)`` shared by all circular
harmonics of a detector. Frequencies are in radians per sample. Every
profile is rescaled at construction so that the induced filter
``h(omega) exp(j n phi)`` has unit L2 norm, i.e. ``b_0 = 1`` with

    b_z = 1/(2 pi) * int omega**z h(omega)**2 omega d omega
    d_z = 1/(2 pi) * int omega**z h(omega) h(2 omega) omega d omega
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import NoSolution, NonConvergentIntegral, UnsupportedProfile

FAMILIES = ("meyer", "shannon", "simoncelli", "log")
BANDPASS = ("meyer", "shannon", "simoncelli")

DEFAULT_LOG_SIGMA = 2.0

_QUAD_OPTS = dict(epsabs=1e-14, epsrel=1e-12, limit=400)


def _nu(t):
    return t**4 * (35.0 - 84.0 * t + 70.0 * t**2 - 20.0 * t**3)


def _meyer_raw(w):
    w = np.asarray(w, dtype=float)
    out = np.zeros_like(w)
    lo = (w > np.pi / 4) & (w <= np.pi / 2)
    hi = (w > np.pi / 2) & (w <= np.pi)
    out[lo] = np.sin(np.pi / 2 * _nu(4 * w[lo] / np.pi - 1))
    out[hi] = np.cos(np.pi / 2 * _nu(2 * w[hi] / np.pi - 1))
    return out


def _shannon_raw(w):
    w = np.asarray(w, dtype=float)
    return ((w > np.pi / 2) & (w <= np.pi)).astype(float)


def _simoncelli_raw(w):
    w = np.asarray(w, dtype=float)
    out = np.zeros_like(w)
    m = (w > np.pi / 4) & (w <= np.pi)
    out[m] = np.cos(np.pi / 2 * np.log2(2 * w[m] / np.pi))
    return out


def _log_raw(w, sigma):
    w = np.asarray(w, dtype=float)
    return w**2 * np.exp(-0.5 * sigma**2 * w**2)


_SUPPORT = {
    "meyer": (np.pi / 4, np.pi),
    "shannon": (np.pi / 2, np.pi),
    "simoncelli": (np.pi / 4, np.pi),
    "log": (0.0, np.inf),
}

# interior points where the integrand is not smooth (or peaks)
_BREAKS = {
    "meyer": (np.pi / 2,),
    "shannon": (),
    "simoncelli": (np.pi / 2,),
    "log": (),
}


@dataclass(frozen=True)
class RadialProfile:
    """Normalized radial profile ``h(omega) = norm_constant * raw(omega)``.

    Build instances with :func:`make_profile`; the normalization constant
    is computed there by quadrature.
    """

    family: str
    log_sigma: float = DEFAULT_LOG_SIGMA
    norm_constant: float = 1.0
    support: tuple = field(default=(0.0, np.inf))

    def raw(self, omega):
        if self.family == "meyer":
            return _meyer_raw(omega)
        if self.family == "shannon":
            return _shannon_raw(omega)
        if self.family == "simoncelli":
            return _simoncelli_raw(omega)
        return _log_raw(omega, self.log_sigma)

    def __call__(self, omega):
        return self.norm_constant * self.raw(omega)

    @property
    def is_bandpass(self) -> bool:
        return self.family in BANDPASS

    @property
    def profile_id(self) -> str:
        if self.family == "log":
            return f"log(sigma={self.log_sigma:g})"
        return self.family

    def breakpoints(self, scale: float = 1.0) -> tuple:
        """Interior breakpoints of ``h(scale * omega)``."""
        return tuple(b / scale for b in _BREAKS[self.family])

    def scaled_support(self, scale: float = 1.0) -> tuple:
        lo, hi = self.support
        return lo / scale, hi / scale


def make_profile(family: str, log_sigma: float = DEFAULT_LOG_SIGMA) -> RadialProfile:
    """Construct a unit-norm profile of the given family."""
    family = family.lower()
    if family not in FAMILIES:
        raise ValueError(f"unknown profile family {family!r}; expected one of {FAMILIES}")
    if family == "log" and not log_sigma > 0:
        raise ValueError("log_sigma must be positive")
    proto = RadialProfile(family, float(log_sigma), 1.0, _SUPPORT[family])
    energy = _integrate(lambda w: proto.raw(w) ** 2 * w, proto) / (2 * np.pi)
    norm = 1.0 / math.sqrt(energy)
    if not (np.isfinite(norm) and norm > 0):
        raise NonConvergentIntegral(f"cannot normalize profile {family}")
    return RadialProfile(family, float(log_sigma), norm, _SUPPORT[family])


def _integrate(fn: Callable, profile: RadialProfile, lo=None, hi=None) -> float:
    """Adaptive Gauss-Kronrod over the profile support, split at breakpoints."""
    s_lo, s_hi = profile.support
    lo = s_lo if lo is None else max(lo, s_lo)
    hi = s_hi if hi is None else min(hi, s_hi)
    if not lo < hi:
        return 0.0
    f = lambda w: float(fn(w))  # noqa: E731
    if np.isinf(hi):
        # peak of the LoG energy sits near sqrt(2)/sigma; split there
        mid = 4.0 / profile.log_sigma
        a, _ = integrate.quad(f, lo, mid, **_QUAD_OPTS)
        b, _ = integrate.quad(f, mid, np.inf, **_QUAD_OPTS)
        return a + b
    pts = sorted(p for p in profile.breakpoints() if lo < p < hi)
    edges = [lo, *pts, hi]
    return sum(integrate.quad(f, a, b, **_QUAD_OPTS)[0] for a, b in zip(edges[:-1], edges[1:]))


def eval_profile(profile: RadialProfile, omega):
    """Normalized ``h(omega)``; zero outside the support of bandpass families."""
    omega = np.asarray(omega, dtype=float)
    if np.any(~np.isfinite(omega)) or np.any(omega < 0):
        raise ValueError("omega must be finite and nonnegative")
    out = profile(omega)
    return float(out) if out.ndim == 0 else out


def spectral_moment_b(profile: RadialProfile, z: float) -> float:
    """``b_z``: weighted energy of the profile."""
    if profile.family == "log" and z <= -6:
        # h**2 ~ omega**4 near the origin
        raise NonConvergentIntegral(f"b_z diverges at the origin for LoG with z={z}")
    return _integrate(lambda w: w**z * profile(w) ** 2 * w, profile) / (2 * np.pi)


def spectral_moment_d(profile: RadialProfile, z: float) -> float:
    """``d_z``: weighted overlap between the profile and its 2x dilation."""
    if not profile.is_bandpass:
        raise UnsupportedProfile("d_z needs a profile supported in (pi/4, pi]")
    fn = lambda w: w**z * profile(w) * profile(2 * w) * w  # noqa: E731
    return _integrate(fn, profile, np.pi / 4, np.pi / 2) / (2 * np.pi)


@dataclass(frozen=True)
class SpectralConstants:
    """Noise constants of a (profile, gamma, sigma0) triple.

    ``B`` is the variance and ``D`` the adjacent-scale covariance of the
    scale-normalized wavelet measurements.
    """

    b_z: float
    d_z: float
    B: float
    D: float
    gamma: float
    sigma0: float
    excluded_gamma: float = math.inf

    def __post_init__(self):
        if not self.B > 2 * abs(self.D):
            raise ValueError(f"constants violate B > 2|D| (B={self.B}, D={self.D})")


def noise_constants(profile: RadialProfile, gamma: float, sigma0: float) -> SpectralConstants:
    if gamma < 0 or not sigma0 > 0:
        raise ValueError("need gamma >= 0 and sigma0 > 0")
    z = -2.0 * gamma
    b = spectral_moment_b(profile, z)
    d = spectral_moment_d(profile, z)
    return SpectralConstants(
        b_z=b,
        d_z=d,
        B=sigma0**2 * b,
        D=sigma0**2 * 2.0 ** (1.0 - gamma) * d,
        gamma=float(gamma),
        sigma0=float(sigma0),
        excluded_gamma=excluded_gamma(profile),
    )


def _moment_ratio(profile: RadialProfile, measure: str) -> tuple[float, float]:
    # "line" integrates with d omega, "plane" with omega d omega
    if measure == "line":
        z = -1.0
    elif measure == "plane":
        z = 0.0
    else:
        raise ValueError("measure must be 'line' or 'plane'")
    return spectral_moment_b(profile, z), spectral_moment_d(profile, z)


def excluded_gamma(profile: RadialProfile, measure: str = "line") -> float:
    """Noise order at which the scale-coupling filter gets a unit-circle zero.

    Solves ``b/|d| = 2**(1-g) + 2**(1+g)`` for ``g >= 0``. With
    ``measure="line"`` the moments are taken against ``d omega``, which
    reproduces the published table; ``measure="plane"`` uses the
    ``omega d omega`` moments ``b_0, d_0``.
    """
    b, d = _moment_ratio(profile, measure)
    # normalization cancels in the ratio, so an absolute floor on the raw scale is safe
    if abs(d) / profile.norm_constant**2 < 1e-12:
        return math.inf
    r = b / abs(d)
    disc = r * r - 16.0
    if disc < 0:
        raise NoSolution(f"b/|d| = {r:.6g} < 4: no real excluded gamma")
    return math.log2((r + math.sqrt(disc)) / 4.0)
