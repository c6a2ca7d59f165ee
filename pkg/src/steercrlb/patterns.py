"""Directional templates and their circular-harmonic coefficients.

Analytic templates J1-J4 are given as real, polar-separable functions
``T(omega, phi) = R(omega) A(phi)`` in the Fourier domain. Their
coefficients against the filters ``h(omega) exp(j n phi)`` are

    u_n = 1/(2 pi) int G(phi) exp(j n phi) d phi,
    G(phi) = 1/(2 pi) int conj(T(omega, phi)) h(omega) omega d omega.

A real raster with these coefficients for ``n >= 0`` exists but its
spectrum is not ``T`` itself (a three-fold ``T`` is not centrosymmetric).
:class:`PatternSynthesizer` builds that raster by keeping the template's
angular Fourier coefficients ``a_n`` for ``n >= 0`` and completing the
negative ones so the spectrum is Hermitian.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import numpy as np
from scipy import fft, integrate, ndimage

from .errors import FrequencyOutOfRange, ScaleOutOfRange
from .grid import FrequencyGrid, from_spectrum, to_spectrum
from .radial import RadialProfile

ANALYTIC_KINDS = ("J1", "J2", "J3", "J4")
DEFAULT_N_ANGLES = 4096
DEFAULT_N_MAX = 128

# (angular frequency of the cosine, indicator?) per analytic kind
_ANGULAR = {"J1": (1.5, True), "J2": (1.5, False), "J3": (2.0, True), "J4": (2.0, False)}


@dataclass(frozen=True, eq=False)
class Pattern:
    """A template: analytic (J1-J4) or a centered raster image.

    ``radial_scale`` dilates analytic templates radially,
    ``T_s(omega, phi) = T(radial_scale * omega, phi)``.
    """

    kind: str
    lam: float = 2.1
    beta: float = 28.0
    alpha: float = 2.5
    radial_scale: float = 1.0
    raster: Optional[np.ndarray] = None
    pitch: float = 1.0

    def __post_init__(self):
        if self.kind == "raster":
            if self.raster is None:
                raise ValueError("raster pattern needs an image")
            img = np.asarray(self.raster, dtype=float)
            if img.ndim != 2 or min(img.shape) < 16:
                raise ValueError("raster must be 2D with width and height >= 16")
            if not np.all(np.isfinite(img)):
                raise ValueError("raster contains non-finite values")
            object.__setattr__(self, "raster", img)
        elif self.kind not in ANALYTIC_KINDS:
            raise ValueError(f"unknown pattern kind {self.kind!r}")

    @property
    def is_analytic(self) -> bool:
        return self.kind != "raster"

    @property
    def symmetry_order(self) -> int:
        """Rotational symmetry order of analytic templates (1 for rasters)."""
        if self.kind in ("J1", "J2"):
            return 3
        if self.kind in ("J3", "J4"):
            return 4
        return 1

    def radial_factor(self, omega):
        w = self.radial_scale * np.asarray(omega, dtype=float)
        if self.kind in ("J1", "J3"):
            return np.ones_like(w)
        if self.kind == "J2":
            return 1.0 / (1.0 + w**self.lam)
        with np.errstate(divide="ignore"):
            return np.where(w > 0, np.exp(-1.0 / (self.alpha * np.where(w > 0, w, 1.0))), 0.0)

    def angular_factor(self, phi):
        freq, indicator = _ANGULAR[self.kind]
        # beta is applied to |cos|, identical to cos**beta for even integer beta
        val = np.abs(np.cos(freq * np.asarray(phi, dtype=float))) ** self.beta
        return (val > 0.8).astype(float) if indicator else val

    def spectrum(self, omega, phi):
        """Template value ``T(omega, phi)``."""
        return self.radial_factor(omega) * self.angular_factor(phi)

    def angular_coefficients(self, ns, n_angles: int = DEFAULT_N_ANGLES) -> np.ndarray:
        """``a_n = 1/(2 pi) int A(phi) exp(-j n phi) d phi`` for integer ``ns``."""
        ns = np.asarray(ns, dtype=int)
        freq, indicator = _ANGULAR[self.kind]
        if indicator:
            # union of 2*freq lobes of half-width phi_c around multiples of pi/freq
            k = int(round(2 * freq))
            phi_c = math.acos(0.8 ** (1.0 / self.beta)) / freq
            out = np.zeros(ns.shape, dtype=complex)
            hit = ns % k == 0
            nz = hit & (ns != 0)
            out[nz] = k * np.sin(ns[nz] * phi_c) / (np.pi * ns[nz])
            out[ns == 0] = k * phi_c / np.pi
            return out
        phi = 2 * np.pi * np.arange(n_angles) / n_angles
        coeffs = fft.fft(self.angular_factor(phi)) / n_angles
        # the smooth kinds are trigonometric polynomials; drop FFT round-off
        coeffs[np.abs(coeffs) < 1e-15 * np.abs(coeffs[0])] = 0.0
        return coeffs[ns % n_angles]


@dataclass(frozen=True)
class HarmonicTable:
    """Coefficients keyed by harmonic ``n`` (single scale) or ``(n, i)`` (wavelet)."""

    entries: dict
    profile_id: str
    convention: str = "single"

    def __getitem__(self, key):
        return self.entries[key]

    def __contains__(self, key):
        return key in self.entries

    def __len__(self):
        return len(self.entries)

    def keys(self):
        return self.entries.keys()

    def get(self, key, default=0.0):
        return self.entries.get(key, default)

    @property
    def harmonics(self) -> list:
        if self.convention == "single":
            return sorted(self.entries)
        return sorted({n for n, _ in self.entries})

    def positive(self) -> list:
        return [n for n in self.harmonics if n > 0]

    @property
    def non_informative(self) -> list:
        """Keys with harmonic 0; they carry no angular information."""
        if self.convention == "single":
            return [k for k in self.entries if k == 0]
        return [k for k in self.entries if k[0] == 0]

    def scaled(self, c) -> "HarmonicTable":
        return HarmonicTable({k: c * v for k, v in self.entries.items()}, self.profile_id, self.convention)

    def abs_array(self, ns) -> np.ndarray:
        return np.array([abs(self.entries.get(n, 0.0)) for n in ns])


def _band_integral(fn, lo, hi, breaks=()):
    pts = sorted(p for p in breaks if lo < p < hi)
    edges = [lo, *pts, hi]
    total_re = total_im = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        total_re += integrate.quad(lambda w: np.real(fn(w)), a, b, epsabs=1e-15, epsrel=1e-12, limit=400)[0]
        total_im += integrate.quad(lambda w: np.imag(fn(w)), a, b, epsabs=1e-15, epsrel=1e-12, limit=400)[0]
    return total_re + 1j * total_im


def _radial_weight(pattern: Pattern, profile: RadialProfile, scale_exp: int = 0) -> float:
    """``1/(2 pi) int R(omega) 2**i h(2**i omega) omega d omega`` for analytic templates."""
    s = 2.0**scale_exp
    lo, hi = profile.scaled_support(s)
    fn = lambda w: pattern.radial_factor(w) * s * profile(s * w) * w  # noqa: E731
    if np.isinf(hi):
        mid = 4.0 / (profile.log_sigma * s)
        val = sum(integrate.quad(lambda w: float(fn(w)), a, b, epsabs=1e-15, epsrel=1e-12, limit=400)[0]
                  for a, b in ((lo, mid), (mid, np.inf)))
    else:
        val = _band_integral(fn, lo, hi, profile.breakpoints(s)).real
    return val / (2 * np.pi)


class RasterSpectrum:
    """Bilinear sampler of a raster's continuous-domain spectrum ``J^(omega, phi)``."""

    def __init__(self, pattern: Pattern):
        if pattern.kind != "raster":
            raise ValueError("raster_spectrum needs a raster pattern")
        img = pattern.raster
        self.pitch = pattern.pitch
        self.grid = FrequencyGrid(img.shape[0], img.shape[1], pattern.pitch)
        shat = fft.fftshift(to_spectrum(img)) * pattern.pitch**2
        self._re = np.ascontiguousarray(shat.real)
        self._im = np.ascontiguousarray(shat.imag)
        h, w = img.shape
        self._f0 = (2 * np.pi * fft.fftshift(fft.fftfreq(h, self.pitch))[0],
                    2 * np.pi * fft.fftshift(fft.fftfreq(w, self.pitch))[0])
        self._df = (2 * np.pi / (h * self.pitch), 2 * np.pi / (w * self.pitch))

    @property
    def nyquist(self) -> float:
        return np.pi / self.pitch

    def __call__(self, omega, phi):
        omega, phi = np.broadcast_arrays(np.asarray(omega, dtype=float), np.asarray(phi, dtype=float))
        wx = omega * np.cos(phi)
        wy = omega * np.sin(phi)
        lim = self.nyquist * (1 + 1e-12)
        if np.any(np.abs(wx) > lim) or np.any(np.abs(wy) > lim):
            raise FrequencyOutOfRange("frequency beyond Nyquist requested from raster spectrum")
        rows = (wy - self._f0[0]) / self._df[0]
        cols = (wx - self._f0[1]) / self._df[1]
        coords = np.stack([rows.ravel(), cols.ravel()])
        re = ndimage.map_coordinates(self._re, coords, order=1, mode="grid-wrap")
        im = ndimage.map_coordinates(self._im, coords, order=1, mode="grid-wrap")
        return (re + 1j * im).reshape(omega.shape)


def raster_spectrum(pattern: Pattern) -> RasterSpectrum:
    return RasterSpectrum(pattern)


def _gauss_nodes(lo, hi, breaks, n_per=192):
    x, w = np.polynomial.legendre.leggauss(n_per)
    pts = sorted(p for p in breaks if lo < p < hi)
    edges = [lo, *pts, hi]
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * x + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _raster_G(sampler: RasterSpectrum, profile: RadialProfile, phis, scale_exp=0):
    s = 2.0**scale_exp
    lo, hi = profile.scaled_support(s)
    if np.isinf(hi):
        hi = sampler.nyquist
    if hi > sampler.nyquist * (1 + 1e-12):
        raise ScaleOutOfRange(f"scale {scale_exp} reaches {hi:.4g} rad/sample beyond Nyquist")
    nodes, weights = _gauss_nodes(lo, hi, profile.breakpoints(s))
    hw = s * profile(s * nodes) * nodes * weights
    shat = sampler(nodes[None, :], np.asarray(phis)[:, None])
    return (np.conj(shat) @ hw) / (2 * np.pi)


def angular_profile(pattern: Pattern, profile: RadialProfile, phi):
    """``G(phi) = 1/(2 pi) int conj(J^(omega, phi)) h(omega) omega d omega``."""
    phi = np.asarray(phi, dtype=float)
    if pattern.is_analytic:
        out = _radial_weight(pattern, profile) * pattern.angular_factor(phi)
    else:
        out = _raster_G(RasterSpectrum(pattern), profile, np.atleast_1d(phi)).reshape(phi.shape)
    return out.item() if np.ndim(out) == 0 else out


def _sign(n) -> np.ndarray:
    # negative-harmonic filters are the conjugates of the positive ones
    n = np.asarray(n)
    return np.where(n < 0, (-1.0) ** np.abs(n), 1.0)


def _coefficients_at_scale(pattern, profile, ns, scale_exp, n_angles, sampler=None, enforce_hermitian=True):
    ns = np.asarray(ns, dtype=int)
    if pattern.is_analytic:
        rho = _radial_weight(pattern, profile, scale_exp)
        a = pattern.angular_coefficients(np.abs(ns), n_angles)
        u = rho * np.conj(a)
        return np.where(ns < 0, np.conj(u), u)
    phis = 2 * np.pi * np.arange(n_angles) / n_angles
    G = _raster_G(sampler, profile, phis, scale_exp)
    # (1/M) sum_m G(phi_m) exp(j n phi_m) is the trapezoid rule on the periodic grid
    spectrum = fft.ifft(G)
    if enforce_hermitian:
        u = spectrum[np.abs(ns) % n_angles]
        return np.where(ns < 0, np.conj(u), u)
    return _sign(ns) * spectrum[ns % n_angles]


def harmonic_coefficients(pattern: Pattern, profile: RadialProfile, harmonics: Iterable[int],
                          n_angles: int = DEFAULT_N_ANGLES, enforce_hermitian: bool = True) -> HarmonicTable:
    ns = sorted(set(int(n) for n in harmonics))
    if not ns:
        raise ValueError("harmonic set is empty")
    sampler = None if pattern.is_analytic else RasterSpectrum(pattern)
    u = _coefficients_at_scale(pattern, profile, ns, 0, n_angles, sampler, enforce_hermitian)
    return HarmonicTable({n: complex(v) for n, v in zip(ns, u)}, profile.profile_id, "single")


def wavelet_coefficients(pattern: Pattern, profile: RadialProfile, harmonics: Iterable[int],
                         scales: Iterable[int], n_angles: int = DEFAULT_N_ANGLES) -> HarmonicTable:
    """``u_{n,i}`` against ``2**i h(2**i omega) exp(j n phi)``; ``i > 0`` is coarser."""
    if not profile.is_bandpass:
        raise ValueError("wavelet coefficients need a bandpass profile")
    ns = sorted(set(int(n) for n in harmonics))
    scales = sorted(set(int(i) for i in scales))
    if not ns or not scales:
        raise ValueError("harmonic and scale sets must be nonempty")
    sampler = None if pattern.is_analytic else RasterSpectrum(pattern)
    entries = {}
    for i in scales:
        u = _coefficients_at_scale(pattern, profile, ns, i, n_angles, sampler)
        entries.update({(n, i): complex(v) for n, v in zip(ns, u)})
    return HarmonicTable(entries, profile.profile_id, "wavelet")


class PatternSynthesizer:
    """Renders a real raster of an analytic template at arbitrary rotations.

    The spectrum is restricted to the radial ``support`` band and to
    harmonics ``|n| <= n_max``; within those limits rotation by
    ``theta`` is an exact phase ``exp(-j n theta)`` on each harmonic.
    """

    def __init__(self, pattern: Pattern, grid: FrequencyGrid, support=(np.pi / 4, np.pi),
                 n_max: int = DEFAULT_N_MAX):
        if not pattern.is_analytic:
            raise ValueError("only analytic templates can be synthesized")
        self.pattern = pattern
        self.grid = grid
        lo, hi = support
        r = grid.radius
        band = (r > lo) & (r <= hi) & ~grid.nyquist_mask
        self._flat = np.flatnonzero(band.ravel())
        self._R = pattern.radial_factor(r.ravel()[self._flat])
        ns = np.arange(n_max + 1)
        a = pattern.angular_coefficients(ns)
        keep = np.abs(a) > 1e-15 * np.abs(a).max()
        self.ns, self.a = ns[keep], a[keep]
        phi = grid.angle.ravel()[self._flat]
        arg = np.outer(phi, self.ns)
        self._cos = np.cos(arg)
        self._sin = np.sin(arg)
        # doubled, with the n = 0 term counted once
        self._w = np.where(self.ns == 0, 1.0, 2.0)
        self._odd = (self.ns % 2 == 1)

    def spectrum(self, theta_star: float = 0.0) -> np.ndarray:
        c = self.a * np.exp(-1j * self.ns * theta_star) * self._w
        even = ~self._odd
        # even n: 2 Re(c e^{jn phi}); odd n: 2j Im(c e^{jn phi})
        re = self._cos[:, even] @ c[even].real - self._sin[:, even] @ c[even].imag
        im = self._sin[:, self._odd] @ c[self._odd].real + self._cos[:, self._odd] @ c[self._odd].imag
        out = np.zeros(self.grid.n_pixels, dtype=complex)
        out[self._flat] = self._R * (re + 1j * im)
        return out.reshape(self.grid.shape)

    def image(self, theta_star: float = 0.0) -> np.ndarray:
        return from_spectrum(self.spectrum(theta_star))


def synthesize_pattern_image(pattern: Pattern, theta_star: float, size: int, pitch: float = 1.0,
                             support=(np.pi / 4, np.pi), n_max: int = DEFAULT_N_MAX) -> np.ndarray:
    """Real raster of ``pattern`` rotated by ``theta_star`` on a ``size x size`` grid."""
    if size < 64:
        raise ValueError("grid side must be at least 64")
    grid = FrequencyGrid.square(size, pitch)
    return PatternSynthesizer(pattern, grid, support, n_max).image(theta_star)


# -- file formats -----------------------------------------------------------

def read_raster(path, width: int, height: int) -> np.ndarray:
    data = np.fromfile(path, dtype="<f8")
    if data.size != width * height:
        raise ValueError(f"{path}: expected {width * height} float64 values, found {data.size}")
    return data.reshape(height, width)


def write_raster(path, image: np.ndarray, **extra) -> Path:
    """Write raw little-endian float64 plus a JSON sidecar; returns the sidecar path."""
    path = Path(path)
    img = np.ascontiguousarray(image, dtype="<f8")
    img.tofile(path)
    meta = {"kind": "raster", "path": path.name, "width": int(img.shape[1]), "height": int(img.shape[0])}
    meta.update(extra)
    sidecar = path.with_suffix(".json")
    sidecar.write_text(json.dumps(meta, indent=2))
    return sidecar


def load_pattern(doc, base_dir=None) -> Pattern:
    """Build a pattern from a JSON document (dict, JSON text, or path to a file)."""
    if isinstance(doc, (str, Path)):
        text = str(doc)
        if text.lstrip().startswith("{"):
            doc = json.loads(text)
        else:
            p = Path(text)
            base_dir = p.parent if base_dir is None else base_dir
            doc = json.loads(p.read_text())
    doc = dict(doc)
    kind = str(doc.pop("kind"))
    if kind.lower() == "raster":
        path = Path(doc["path"])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        img = read_raster(path, int(doc["width"]), int(doc["height"]))
        return Pattern("raster", raster=img, pitch=float(doc.get("pitch", 1.0)))
    kind = kind.upper()
    kw = {}
    for key, name in (("lambda", "lam"), ("beta", "beta"), ("alpha", "alpha"), ("radial_scale", "radial_scale")):
        if key in doc:
            kw[name] = float(doc[key])
    return Pattern(kind, **kw)
