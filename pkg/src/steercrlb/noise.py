"""Self-similar Gaussian backgrounds with power spectrum ``sigma0**2 omega**(-2 gamma)``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import fft

from .errors import IllPosed, ZeroPattern
from .filterbank import FilterBank
from .grid import FrequencyGrid
from .radial import RadialProfile, noise_constants, spectral_moment_b
from . import rng


@dataclass(frozen=True)
class NoiseModel:
    gamma: float
    sigma0: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise ValueError("gamma must be finite and nonnegative")
        if not (math.isfinite(self.sigma0) and self.sigma0 >= 0):
            raise ValueError("sigma0 must be finite and nonnegative")

    def with_sigma0(self, sigma0: float) -> "NoiseModel":
        return NoiseModel(self.gamma, float(sigma0))


def _check_size(size: int):
    if size < 64 or size & (size - 1):
        raise ValueError("grid side must be a power of two >= 64")


def _amplitude(gamma: float, size: int, pitch: float = 1.0) -> np.ndarray:
    """``omega**(-gamma)`` on the half spectrum, zero at DC."""
    grid = FrequencyGrid.square(size, pitch)
    r = grid.radius[:, : size // 2 + 1]
    amp = np.zeros_like(r)
    nz = r > 0
    amp[nz] = r[nz] ** (-gamma)
    return amp


def synthesize(model: NoiseModel, size: int, seed: int, index: int = 0, pitch: float = 1.0) -> np.ndarray:
    """One realization on a ``size x size`` periodic grid.

    Real white noise is shaped in the Fourier domain, which yields a
    Hermitian half-spectrum with ``E|S^_k|**2 = size**2 sigma0**2 omega_k**(-2 gamma)``.
    ``(seed, index)`` selects an independent stream.
    """
    _check_size(size)
    white = rng.stream(seed, rng.NOISE, index).standard_normal((size, size))
    half = fft.rfft2(white)
    half *= model.sigma0 * _amplitude(model.gamma, size, pitch)
    return fft.irfft2(half, s=(size, size))


def integrability_ok(profile: RadialProfile, gamma: float) -> bool:
    """Whether ``int omega**(1 - 2 gamma) h(omega)**2 d omega`` is finite."""
    if profile.is_bandpass:
        return True
    # h**2 ~ omega**4 near the origin
    return 5.0 - 2.0 * gamma > -1.0


def measurement_covariance(profile: RadialProfile, bank: FilterBank, model: NoiseModel):
    """Analytic covariance of the bank's measurements of the background.

    Returns ``(keys, C)``. In wavelet mode ``C`` refers to the
    scale-normalized measurements ``2**(-i gamma) q_{n,i}``.
    """
    if not integrability_ok(profile, model.gamma):
        raise IllPosed(f"measurements of a gamma={model.gamma} field are not integrable for {profile.profile_id}")
    keys = bank.keys
    if not bank.is_wavelet:
        var = model.sigma0**2 * spectral_moment_b(profile, -2.0 * model.gamma)
        return keys, var * np.eye(len(keys))
    const = noise_constants(profile, model.gamma, 1.0)
    B, D = model.sigma0**2 * const.B, model.sigma0**2 * const.D
    pos = {k: a for a, k in enumerate(keys)}
    C = np.zeros((len(keys), len(keys)))
    for (n, i), a in pos.items():
        C[a, a] = B
        b = pos.get((n, i + 1))
        if b is not None:
            C[a, b] = C[b, a] = D
    return keys, C


def noise_power(gamma: float, size: int, pitch: float = 1.0) -> float:
    """Expected per-pixel mean square of a ``sigma0 = 1`` realization."""
    grid = FrequencyGrid.square(size, pitch)
    r = grid.radius
    nz = r > 0
    return float(np.sum(r[nz] ** (-2.0 * gamma)) / grid.n_pixels)


def snr_scale(pattern_raster: np.ndarray, model: NoiseModel, target_db: float, pitch: float = 1.0) -> float:
    """``sigma0`` giving ``10 log10(mean(J**2) / E mean(S**2)) = target_db``."""
    img = np.asarray(pattern_raster, dtype=float)
    if img.ndim != 2 or img.shape[0] != img.shape[1]:
        raise ValueError("pattern raster must be square")
    signal = float(np.mean(img**2))
    if signal == 0.0:
        raise ZeroPattern("pattern raster is identically zero")
    k = noise_power(model.gamma, img.shape[0], pitch)
    return math.sqrt(signal / (10.0 ** (target_db / 10.0) * k))
