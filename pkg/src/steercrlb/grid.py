"""Discrete frequency grids in FFT order, with the spatial origin at the image center."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import fft


@dataclass(frozen=True)
class FrequencyGrid:
    height: int
    width: int
    pitch: float = 1.0

    @classmethod
    def square(cls, size: int, pitch: float = 1.0) -> "FrequencyGrid":
        return cls(int(size), int(size), float(pitch))

    @property
    def shape(self):
        return (self.height, self.width)

    @property
    def nyquist(self) -> float:
        return np.pi / self.pitch

    @cached_property
    def omega_xy(self):
        wy = 2 * np.pi * fft.fftfreq(self.height, d=self.pitch)
        wx = 2 * np.pi * fft.fftfreq(self.width, d=self.pitch)
        return np.meshgrid(wx, wy)

    @cached_property
    def radius(self) -> np.ndarray:
        wx, wy = self.omega_xy
        return np.hypot(wx, wy)

    @cached_property
    def angle(self) -> np.ndarray:
        wx, wy = self.omega_xy
        return np.arctan2(wy, wx)

    @cached_property
    def nyquist_mask(self) -> np.ndarray:
        """Bins on an unpaired Nyquist row or column (even sizes only)."""
        m = np.zeros(self.shape, dtype=bool)
        if self.height % 2 == 0:
            m[self.height // 2, :] = True
        if self.width % 2 == 0:
            m[:, self.width // 2] = True
        return m

    @property
    def n_pixels(self) -> int:
        return self.height * self.width


def to_spectrum(image: np.ndarray) -> np.ndarray:
    """DFT of a centered image (origin moved to index 0 first)."""
    return fft.fft2(fft.ifftshift(np.asarray(image, dtype=float)))


def from_spectrum(spectrum: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_spectrum`, real part of a centered image."""
    return np.ascontiguousarray(fft.fftshift(fft.ifft2(spectrum).real))
