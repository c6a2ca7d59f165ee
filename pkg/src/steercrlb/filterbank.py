"""Circular-harmonic filter banks, measurements and steering.

A filter of harmonic ``n >= 0`` at scale ``i`` has the spectrum
``2**i h(2**i omega) exp(j n phi)``; negative harmonics are the complex
conjugates of the positive ones, so measurements of real images satisfy
``q_{-n} = conj(q_n)`` exactly. Measurements are inner products taken at
the image center and computed in the Fourier domain.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np
from scipy import fft

from .errors import DuplicateIndex, IndexMismatch, NyquistViolation
from .grid import FrequencyGrid, to_spectrum
from .patterns import HarmonicTable, Pattern, harmonic_coefficients, wavelet_coefficients
from .radial import RadialProfile


def harmonic_sign(n: int) -> float:
    """Factor relating ``conj(h exp(j|n|phi))`` to ``h exp(j n phi)`` in frequency."""
    return (-1.0) ** abs(n) if n < 0 else 1.0


@dataclass(frozen=True, eq=False)
class FilterBank:
    """A set of circular-harmonic filters sharing one radial profile.

    ``harmonics`` lists the integer harmonics. In wavelet mode ``scales``
    lists the scale exponents and the bank holds every ``(n, i)`` pair.
    """

    profile: RadialProfile
    harmonics: tuple
    scales: Optional[tuple] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        hs = tuple(int(n) for n in self.harmonics)
        if not hs:
            raise ValueError("filter bank needs at least one harmonic")
        if len(set(hs)) != len(hs):
            raise DuplicateIndex("harmonics must be distinct")
        object.__setattr__(self, "harmonics", tuple(sorted(hs)))
        if self.scales is not None:
            sc = tuple(int(i) for i in self.scales)
            if not sc or len(set(sc)) != len(sc):
                raise DuplicateIndex("scales must be distinct and nonempty")
            if not self.profile.is_bandpass:
                raise ValueError("wavelet banks need a bandpass profile")
            object.__setattr__(self, "scales", tuple(sorted(sc)))

    @property
    def is_wavelet(self) -> bool:
        return self.scales is not None

    @property
    def profile_id(self) -> str:
        return self.profile.profile_id

    @property
    def keys(self) -> list:
        if self.scales is None:
            return list(self.harmonics)
        return [(n, i) for n in self.harmonics for i in self.scales]

    def max_frequency(self) -> float:
        hi = self.profile.support[1]
        if self.scales is not None:
            hi = hi / 2.0 ** min(self.scales)
        return hi

    def filter_spectrum(self, key, grid: FrequencyGrid) -> np.ndarray:
        """Sampled spectrum of one filter on ``grid`` (FFT order, Nyquist bins zeroed)."""
        n, i = (key, 0) if self.scales is None else key
        s = 2.0**i
        r, phi = grid.radius, grid.angle
        fhat = harmonic_sign(n) * s * self.profile(s * r) * np.exp(1j * n * phi)
        fhat[grid.nyquist_mask] = 0.0
        return fhat

    def _matrix(self, grid: FrequencyGrid):
        """Stacked filter spectra restricted to bins where any filter is nonzero."""
        with self._lock:
            hit = self._cache.get(grid)
            if hit is not None:
                return hit
        if self.profile.is_bandpass and self.max_frequency() > grid.nyquist * (1 + 1e-12):
            raise NyquistViolation(
                f"filters reach {self.max_frequency():.4g} rad/sample, beyond Nyquist {grid.nyquist:.4g}"
            )
        spectra = np.stack([self.filter_spectrum(k, grid).ravel() for k in self.keys])
        support = np.flatnonzero(np.any(spectra != 0, axis=0))
        mat = np.ascontiguousarray(spectra[:, support])
        out = (support, mat)
        with self._lock:
            self._cache[grid] = out
        return out


@dataclass(frozen=True)
class MeasurementVector:
    """Measurements ``q`` keyed like the bank (``n`` or ``(n, i)``)."""

    entries: dict
    wavelet: bool = False

    def __getitem__(self, key):
        return self.entries[key]

    def keys(self):
        return self.entries.keys()

    def array(self, keys) -> np.ndarray:
        return np.array([self.entries[k] for k in keys], dtype=complex)

    def normalized(self, gamma: float) -> "MeasurementVector":
        """Scale-normalized measurements ``2**(-i gamma) q_{n,i}``."""
        if not self.wavelet:
            return self
        return MeasurementVector({(n, i): v * 2.0 ** (-i * gamma) for (n, i), v in self.entries.items()}, True)

    def restrict(self, keys) -> "MeasurementVector":
        return MeasurementVector({k: self.entries[k] for k in keys}, self.wavelet)


def measure(image: np.ndarray, bank: FilterBank, pitch: float = 1.0) -> MeasurementVector:
    """Inner products of ``image`` with every filter of ``bank`` at the image center."""
    image = np.asarray(image, dtype=float)
    if image.ndim != 2:
        raise ValueError("image must be 2D")
    grid = FrequencyGrid(image.shape[0], image.shape[1], float(pitch))
    support, mat = bank._matrix(grid)
    fhat = to_spectrum(image).ravel()[support]
    # sum_x I(x) xi(x) = 1/(N p)^2 sum_k conj(I^_k) xi^_k, with I^ the DFT and xi^ the continuous spectrum
    q = mat @ np.conj(fhat) / (grid.n_pixels * pitch**2)
    return MeasurementVector(dict(zip(bank.keys, q.tolist())), bank.is_wavelet)


def measure_spectrum(spectrum: np.ndarray, bank: FilterBank, pitch: float = 1.0) -> MeasurementVector:
    """Like :func:`measure` but from the DFT of a centered image."""
    grid = FrequencyGrid(spectrum.shape[0], spectrum.shape[1], float(pitch))
    support, mat = bank._matrix(grid)
    q = mat @ np.conj(spectrum.ravel()[support]) / (grid.n_pixels * pitch**2)
    return MeasurementVector(dict(zip(bank.keys, q.tolist())), bank.is_wavelet)


def _harmonic(key) -> int:
    return key if isinstance(key, (int, np.integer)) else key[0]


def _steer_terms(q, c):
    """Arrays ``(n, weight, q conj(c))`` for the steered response under Hermitian completion."""
    q_entries = q.entries if isinstance(q, MeasurementVector) else dict(q)
    c_entries = c.entries if isinstance(c, (HarmonicTable, MeasurementVector)) else dict(c)
    missing = [k for k in c_entries if k not in q_entries]
    if missing:
        raise IndexMismatch(f"template indices {missing[:5]} have no measurement")
    ns = np.array([_harmonic(k) for k in c_entries], dtype=int)
    keys = list(c_entries)
    if np.any(ns < 0):
        # the set must be closed under negation with matching key layout
        for k in keys:
            neg = -k if np.ndim(k) == 0 else (-k[0], *k[1:])
            if neg not in c_entries:
                raise IndexMismatch(f"index {k} present without its negative")
        weights = np.ones(len(keys))
    else:
        weights = np.where(ns == 0, 1.0, 2.0)
    prod = np.array([q_entries[k] * np.conj(c_entries[k]) for k in keys], dtype=complex)
    return ns, weights, prod


def steer_response(q, c, theta0: float) -> float:
    """Real steered correlation ``Re sum q_n conj(c_n) exp(-j n theta0)``.

    When ``c`` holds only harmonics ``n >= 0`` the negative ones are
    implied by Hermitian symmetry, which doubles every ``n > 0`` term.
    """
    ns, w, prod = _steer_terms(q, c)
    return float(np.sum(w * np.real(prod * np.exp(-1j * ns * theta0))))


def project_pattern(pattern: Pattern, bank: FilterBank) -> HarmonicTable:
    """Matched-filter template coefficients ``c = <J, xi>`` for every filter of the bank."""
    if bank.is_wavelet:
        return wavelet_coefficients(pattern, bank.profile, bank.harmonics, bank.scales)
    return harmonic_coefficients(pattern, bank.profile, bank.harmonics)


def render_filter(coeffs: Mapping, bank: FilterBank, grid: FrequencyGrid, theta0: float = 0.0) -> np.ndarray:
    """Spatial filter ``sum_a coeffs_a xi_a(R_{-theta0} x)`` on ``grid``, centered.

    The rotation is applied to the continuous spectrum before sampling,
    so this path does not reuse the steering identity.
    """
    fhat = np.zeros(grid.shape, dtype=complex)
    rot = FrequencyGrid(grid.height, grid.width, grid.pitch)
    r = rot.radius
    phi = rot.angle - theta0
    for key, a in coeffs.items():
        n, i = (key, 0) if not bank.is_wavelet else key
        s = 2.0**i
        fhat += a * harmonic_sign(n) * s * bank.profile(s * r) * np.exp(1j * n * phi)
    fhat[grid.nyquist_mask] = 0.0
    # continuous spectrum to samples: divide by pitch**2
    return fft.fftshift(fft.ifft2(fhat)) / grid.pitch**2
