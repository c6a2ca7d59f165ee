"""Fisher information of multiscale measurements.

Scale-normalized measurements ``2**(-i gamma) q_{n,i}`` of one harmonic
at adjacent scales are correlated (constant ``D``); everything else is
uncorrelated. Splitting the index set into runs of consecutive scales
per harmonic makes the covariance block diagonal with Toeplitz
tridiagonal blocks, whose eigensystem is known in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .crlb import CrlbReport, fisher_bruteforce
from .errors import DuplicateIndex, ExcludedGamma, GroupingMismatch
from .noise import NoiseModel
from .patterns import HarmonicTable, Pattern, wavelet_coefficients
from .radial import RadialProfile, SpectralConstants, noise_constants

EXCLUDED_MARGIN = 1e-6

__all__ = [
    "Group", "Grouping", "TridiagonalBlock", "group_indices", "block_eigensystem", "fisher_wavelet",
    "crlb_bounds", "fisher_bruteforce", "wavelet_crlb_curve", "wavelet_scales", "CrlbBounds",
]


@dataclass(frozen=True)
class Group:
    n: int
    start: int
    length: int

    @property
    def indices(self) -> list:
        return [(self.n, self.start + e) for e in range(self.length)]


@dataclass(frozen=True)
class Grouping:
    groups: tuple

    @property
    def g(self) -> int:
        return len(self.groups)

    def indices(self) -> list:
        return [idx for grp in self.groups for idx in grp.indices]


@dataclass(frozen=True)
class TridiagonalBlock:
    size: int
    B: float
    D: float

    def dense(self) -> np.ndarray:
        l = self.size
        return self.B * np.eye(l) + self.D * (np.eye(l, k=1) + np.eye(l, k=-1))


def group_indices(indices: Iterable) -> Grouping:
    """Split ``(n, i)`` pairs into runs of consecutive scales per harmonic.

    Negative harmonics are folded onto positive ones (they carry the
    conjugate measurement) and harmonic 0 is dropped.
    """
    seen = set()
    folded = set()
    for n, i in indices:
        key = (int(n), int(i))
        if key in seen:
            raise DuplicateIndex(f"index {key} given twice")
        seen.add(key)
        if key[0] != 0:
            folded.add((abs(key[0]), key[1]))
    groups = []
    for n in sorted({n for n, _ in folded}):
        scales = sorted(i for m, i in folded if m == n)
        start = prev = scales[0]
        for i in scales[1:]:
            if i != prev + 1:
                groups.append(Group(n, start, prev - start + 1))
                start = i
            prev = i
        groups.append(Group(n, start, prev - start + 1))
    return Grouping(tuple(groups))


def block_eigensystem(block: TridiagonalBlock):
    """Eigenvalues ``B + 2D cos(t pi/(l+1))`` and orthonormal eigenvectors (columns), ``t = 1..l``."""
    l = block.size
    if l < 1:
        raise ValueError("block size must be >= 1")
    t = np.arange(1, l + 1)
    vals = block.B + 2.0 * block.D * np.cos(t * np.pi / (l + 1))
    e = np.arange(1, l + 1)
    vecs = math.sqrt(2.0 / (l + 1)) * np.sin(np.outer(e, t) * np.pi / (l + 1))
    return vals, vecs


def _check(u: HarmonicTable, constants: SpectralConstants, grouping: Grouping):
    if abs(constants.gamma - constants.excluded_gamma) < EXCLUDED_MARGIN:
        raise ExcludedGamma(f"gamma={constants.gamma} is within {EXCLUDED_MARGIN} of the excluded value")
    lacking = [idx for idx in grouping.indices() if idx not in u]
    if lacking:
        raise GroupingMismatch(f"table lacks indices {lacking[:5]}")


def fisher_wavelet(u: HarmonicTable, constants: SpectralConstants, grouping: Grouping) -> float:
    """Closed-form Fisher information from the eigensystems of the tridiagonal blocks."""
    _check(u, constants, grouping)
    gamma = constants.gamma
    total = 0.0
    for grp in grouping.groups:
        vals, vecs = block_eigensystem(TridiagonalBlock(grp.length, constants.B, constants.D))
        w = np.array([2.0 ** (-i * gamma) * u[(n, i)] for n, i in grp.indices])
        proj = vecs.T @ w
        total += grp.n**2 * float(np.sum(np.abs(proj) ** 2 / vals))
    return 2.0 * total


@dataclass(frozen=True)
class CrlbBounds:
    lower: float
    exact: float
    upper: float


def crlb_bounds(u: HarmonicTable, constants: SpectralConstants, grouping: Grouping) -> CrlbBounds:
    """Exact CRLB with the eigenvalue sandwich ``(B -+ 2|D|) / (2 sum n**2 4**(-i gamma) |u|**2)``."""
    fi = fisher_wavelet(u, constants, grouping)
    gamma = constants.gamma
    s = 2.0 * math.fsum(n * n * 4.0 ** (-i * gamma) * abs(u[(n, i)]) ** 2 for n, i in grouping.indices())
    if s == 0.0:
        return CrlbBounds(math.inf, math.inf, math.inf)
    exact = math.inf if fi == 0.0 else 1.0 / fi
    return CrlbBounds((constants.B - 2 * abs(constants.D)) / s, exact,
                      (constants.B + 2 * abs(constants.D)) / s)


def wavelet_dense_problem(u: HarmonicTable, constants: SpectralConstants, indices, theta_star: float = 0.0):
    """Mean derivative and covariance of the normalized measurements, for the dense oracle."""
    idx = sorted({(abs(n), i) for n, i in indices if n != 0})
    gamma = constants.gamma
    dmu = np.array([1j * n * np.exp(1j * n * theta_star) * 2.0 ** (-i * gamma) * u[(n, i)] for n, i in idx])
    pos = {k: a for a, k in enumerate(idx)}
    C = constants.B * np.eye(len(idx))
    for (n, i), a in pos.items():
        b = pos.get((n, i + 1))
        if b is not None:
            C[a, b] = C[b, a] = constants.D
    return dmu, C


def wavelet_scales(S: int, direction: str = "finer") -> list:
    """Scale exponents used with ``S`` scales.

    ``"finer"`` adds bands ``(2**k pi/4, 2**k pi]`` above the fundamental
    one, reaching ever higher frequencies; it is only usable with analytic
    templates. ``"coarser"`` adds bands below it and stays within the
    Nyquist limit of a raster.
    """
    if S < 1:
        raise ValueError("S must be >= 1")
    if direction == "finer":
        return [-k for k in range(S)]
    if direction == "coarser":
        return list(range(S))
    raise ValueError("direction must be 'finer' or 'coarser'")


def wavelet_crlb_curve(pattern: Pattern, profile: RadialProfile, model: NoiseModel, harmonics,
                       S_max: int, direction: str = "finer", table: Optional[HarmonicTable] = None) -> CrlbReport:
    """Exact CRLB and bounds using ``S = 1..S_max`` scales."""
    hs = sorted({abs(int(n)) for n in harmonics if int(n) != 0})
    if not hs:
        raise ValueError("need at least one nonzero harmonic")
    constants = noise_constants(profile, model.gamma, model.sigma0)
    all_scales = wavelet_scales(S_max, direction)
    if table is None:
        table = wavelet_coefficients(pattern, profile, hs, all_scales)
    exact, lower, upper, sets = [], [], [], []
    for S in range(1, S_max + 1):
        scales = all_scales[:S]
        grouping = group_indices([(n, i) for n in hs for i in scales])
        b = crlb_bounds(table, constants, grouping)
        exact.append(b.exact)
        lower.append(b.lower)
        upper.append(b.upper)
        sets.append(tuple(hs))
    return CrlbReport("wavelet", tuple(range(1, S_max + 1)), tuple(sets), tuple(exact), model.gamma,
                      model.sigma0, profile.profile_id, index_name="S", lower=tuple(lower),
                      upper=tuple(upper), extra={"direction": direction, "scales": tuple(all_scales)})
