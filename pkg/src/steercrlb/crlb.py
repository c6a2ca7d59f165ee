"""Single-scale Cramér-Rao bounds, harmonic selection and convergence checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from scipy import linalg

from .errors import IllPosed, InsufficientTable, MissingCoefficient, SingularCovariance
from .noise import NoiseModel, integrability_ok
from .patterns import HarmonicTable
from .radial import RadialProfile, spectral_moment_b

STRATEGIES = ("first_n", "best_n", "kfold")
_ALIASES = {"first": "first_n", "best": "best_n", "k-fold": "kfold", "k_fold": "kfold"}


def canonical_strategy(name: str) -> str:
    key = _ALIASES.get(name.lower(), name.lower())
    if key not in STRATEGIES:
        raise ValueError(f"unknown strategy {name!r}; expected one of {STRATEGIES}")
    return key


@dataclass(frozen=True)
class CrlbReport:
    """CRLB values (rad^2) along a sequence of harmonic or scale sets.

    ``counts`` holds N (number of harmonics) or S (number of scales),
    depending on ``index_name``. ``lower`` and ``upper`` are filled for
    wavelet reports only.
    """

    strategy: str
    counts: tuple
    harmonic_sets: tuple
    crlb: tuple
    gamma: float
    sigma0: float
    profile_id: str
    index_name: str = "N"
    lower: Optional[tuple] = None
    upper: Optional[tuple] = None
    extra: dict = field(default_factory=dict)


def _positive_set(H_plus: Iterable[int]) -> list:
    hs = [int(n) for n in H_plus]
    if any(n <= 0 for n in hs):
        raise ValueError("H_plus must contain positive harmonics only")
    if len(set(hs)) != len(hs):
        raise ValueError("H_plus contains duplicates")
    return sorted(hs)


def single_scale_variance(profile: RadialProfile, model: NoiseModel) -> float:
    """Variance of each measurement of the background, ``sigma0**2 b_{-2 gamma}``."""
    if not integrability_ok(profile, model.gamma):
        raise IllPosed(f"measurements of a gamma={model.gamma} field are not integrable for {profile.profile_id}")
    return model.sigma0**2 * spectral_moment_b(profile, -2.0 * model.gamma)


def _weights(u: HarmonicTable, hs) -> np.ndarray:
    missing = [n for n in hs if n not in u]
    if missing:
        raise MissingCoefficient(f"table lacks harmonics {missing}")
    n = np.asarray(hs, dtype=float)
    return n**2 * np.array([abs(u[k]) ** 2 for k in hs])


def fisher_single(u: HarmonicTable, profile: RadialProfile, model: NoiseModel, H_plus) -> float:
    """Fisher information about the rotation angle from the harmonics ``H_plus``.

    Each positive harmonic carries a complex measurement whose conjugate
    is the negative harmonic, hence ``FI = 2 sum n**2 |u_n|**2 / C[n, n]``.
    """
    hs = _positive_set(H_plus)
    w = _weights(u, hs)
    var = single_scale_variance(profile, model)
    total = float(np.sum(w))
    if var == 0.0:
        return math.inf if total > 0 else 0.0
    return 2.0 * total / var


def crlb_single(u: HarmonicTable, profile: RadialProfile, model: NoiseModel, H_plus) -> float:
    fi = fisher_single(u, profile, model, H_plus)
    if fi == 0.0:
        return math.inf
    return 1.0 / fi


def crlb_common_profile(u: HarmonicTable, profile: RadialProfile, model: NoiseModel, H_plus) -> float:
    """Closed form ``sigma0**2 b_{-2 gamma} / (2 sum n**2 |u_n|**2)`` for a shared profile."""
    hs = _positive_set(H_plus)
    denom = 2.0 * math.fsum(n * n * abs(u[n]) ** 2 for n in hs) if all(n in u for n in hs) else None
    if denom is None:
        raise MissingCoefficient("table lacks some requested harmonics")
    num = model.sigma0**2 * spectral_moment_b(profile, -2.0 * model.gamma)
    if denom == 0.0:
        return math.inf
    return num / denom


def fisher_bruteforce(mean_derivative, covariance) -> float:
    """``2 Re(dmu^H C^{-1} dmu)`` by dense Cholesky solve."""
    dmu = np.asarray(mean_derivative, dtype=complex).ravel()
    C = np.asarray(covariance)
    if C.shape != (dmu.size, dmu.size):
        raise ValueError("covariance shape does not match the mean derivative")
    if not np.allclose(C, np.conj(C.T), rtol=0, atol=1e-12 * max(1.0, np.abs(C).max())):
        raise SingularCovariance("covariance is not Hermitian")
    try:
        factor = linalg.cho_factor(C, lower=True)
    except linalg.LinAlgError as exc:
        raise SingularCovariance("covariance is not positive definite") from exc
    diag = np.abs(np.diag(factor[0]))
    if diag.min() <= 1e-7 * diag.max():
        raise SingularCovariance("covariance is numerically singular")
    x = linalg.cho_solve(factor, dmu)
    return float(2.0 * np.real(np.vdot(dmu, x)))


def fisher_generic(u: HarmonicTable, profile: RadialProfile, model: NoiseModel, H_plus,
                   theta_star: float = 0.0) -> float:
    """Fisher information via the dense complex-Gaussian path at a given ``theta_star``."""
    hs = _positive_set(H_plus)
    if any(n not in u for n in hs):
        raise MissingCoefficient("table lacks some requested harmonics")
    n = np.asarray(hs, dtype=float)
    uu = np.array([u[k] for k in hs])
    dmu = 1j * n * np.exp(1j * n * theta_star) * uu
    var = single_scale_variance(profile, model)
    return fisher_bruteforce(dmu, var * np.eye(len(hs)))


def select_harmonics(u: HarmonicTable, N: int, strategy: str, k: Optional[int] = None) -> tuple:
    """Choose ``N`` positive harmonics from ``u``.

    ``best_n`` maximizes ``sum n**2 |u_n|**2`` with ties resolved toward
    smaller harmonics.
    """
    strategy = canonical_strategy(strategy)
    if N < 1:
        raise ValueError("N must be >= 1")
    avail = set(u.positive())
    if strategy == "first_n":
        chosen = list(range(1, N + 1))
    elif strategy == "kfold":
        if k is None or k < 1:
            raise ValueError("kfold needs a symmetry order k >= 1")
        chosen = [k * m for m in range(1, N + 1)]
    else:
        if len(avail) < N:
            raise InsufficientTable(f"table has {len(avail)} positive harmonics, {N} requested")
        ranked = sorted(avail, key=lambda n: (-(n * n * abs(u[n]) ** 2), n))
        chosen = ranked[:N]
    lacking = [n for n in chosen if n not in avail]
    if lacking:
        raise InsufficientTable(f"table lacks harmonics {lacking} needed by {strategy}")
    return tuple(sorted(chosen))


def crlb_curve(u: HarmonicTable, profile: RadialProfile, model: NoiseModel, strategy: str, N_max: int,
               k: Optional[int] = None) -> CrlbReport:
    strategy = canonical_strategy(strategy)
    var = single_scale_variance(profile, model)
    sets, vals = [], []
    for N in range(1, N_max + 1):
        hs = select_harmonics(u, N, strategy, k)
        total = float(np.sum(_weights(u, hs)))
        sets.append(hs)
        if total == 0.0:
            vals.append(math.inf)
        else:
            vals.append(var / (2.0 * total))
    return CrlbReport(strategy, tuple(range(1, N_max + 1)), tuple(sets), tuple(vals),
                      model.gamma, model.sigma0, profile.profile_id)


@dataclass(frozen=True)
class ConvergenceDiagnostic:
    partial_sums: np.ndarray
    fitted_decay_exponent: float
    verdict: str


def convergence_diagnostic(u: HarmonicTable, N_max: int) -> ConvergenceDiagnostic:
    """Heuristic test of whether ``sum n**2 |u_n|**2`` stays bounded.

    The decay exponent ``s`` of ``|u_n| ~ n**s`` is estimated on the upper
    half of ``1..N_max``. While the partial sums still grow like ``N**p``
    (``p >= 0.25``) the estimate is ``s = (p - 3)/2``, which averages out
    oscillating coefficients. Once they have levelled off, ``s`` is the
    log-log slope of the running upper envelope of ``|u_n|``. Exponents of
    -1.1 or more are called diverging and -1.5 or less converging.
    """
    if N_max < 16:
        raise ValueError("N_max must be >= 16")
    ns = np.arange(1, N_max + 1)
    mag = np.array([abs(u.get(int(n), 0.0)) for n in ns])
    partial = np.cumsum(ns.astype(float) ** 2 * mag**2)
    top = ns >= N_max // 2
    scale = mag.max() if mag.max() > 0 else 1.0
    sel = top & (mag > 1e-14 * scale)
    if np.count_nonzero(sel) < 2:
        return ConvergenceDiagnostic(partial, -math.inf, "converging")
    grow = float(np.polyfit(np.log(ns[top]), np.log(partial[top]), 1)[0])
    if grow >= 0.25:
        slope = (grow - 3.0) / 2.0
    else:
        # envelope[m] = max over n >= m
        env = np.maximum.accumulate(mag[::-1])[::-1]
        slope = float(np.polyfit(np.log(ns[sel]), np.log(env[sel]), 1)[0])
    if slope >= -1.1:
        verdict = "diverging"
    elif slope <= -1.5:
        verdict = "converging"
    else:
        verdict = "inconclusive"
    return ConvergenceDiagnostic(partial, slope, verdict)
