"""Monte Carlo validation of the single-scale bound and report serialization."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, rng
from .crlb import crlb_single, select_harmonics
from .errors import SteerCrlbError, TrialFailure
from .estimator import estimate_angle, informative_order
from .filterbank import FilterBank, measure
from .grid import FrequencyGrid
from .noise import NoiseModel, snr_scale, synthesize
from .patterns import Pattern, PatternSynthesizer, harmonic_coefficients, load_pattern
from .radial import make_profile

CSV_COLUMNS = ("n_harmonics", "bias_rad", "bias_se", "var_rad2", "mse_rad2", "mse_se", "crlb_rad2",
               "ratio_mse_crlb")


@dataclass
class ExperimentConfig:
    """Inputs of a Monte Carlo run.

    ``harmonic_sets`` lists the positive harmonic sets to evaluate. When
    it is empty, sets are derived from ``strategy`` and ``counts``.
    """

    pattern: dict
    profile: str = "meyer"
    log_sigma: float = 2.0
    gamma: float = 2.5
    snr_db: Optional[float] = None
    sigma0: Optional[float] = None
    trials: int = 1000
    strategy: str = "kfold"
    counts: tuple = ()
    harmonic_sets: tuple = ()
    size: int = 256
    seed: int = 0
    theta_star: Optional[float] = None
    threads: int = 1

    def validate(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if (self.snr_db is None) == (self.sigma0 is None):
            raise ValueError("give exactly one of snr_db and sigma0")
        if self.size < 64 or self.size & (self.size - 1):
            raise ValueError("grid side must be a power of two >= 64")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def echo(self) -> dict:
        out = asdict(self)
        out.pop("threads")
        out["counts"] = list(self.counts)
        out["harmonic_sets"] = [list(s) for s in self.harmonic_sets]
        return out


@dataclass
class ReportRow:
    n_harmonics: int
    bias_rad: float
    bias_se: float
    var_rad2: float
    mse_rad2: float
    mse_se: float
    crlb_rad2: float
    ratio_mse_crlb: float
    harmonics: tuple = ()


@dataclass
class ExperimentReport:
    rows: list
    provenance: dict
    wall_time_s: float = 0.0
    sigma0: float = 0.0
    errors: Optional[np.ndarray] = field(default=None, repr=False)


def _harmonic_sets(cfg: ExperimentConfig, table, pattern: Pattern) -> list:
    if cfg.harmonic_sets:
        return [tuple(sorted(int(n) for n in s)) for s in cfg.harmonic_sets]
    k = pattern.symmetry_order
    return [select_harmonics(table, N, cfg.strategy, k) for N in cfg.counts]


def _support_band(profile, nyquist: float):
    lo, hi = profile.support
    return lo, min(hi, nyquist)


def run_monte_carlo(cfg: ExperimentConfig) -> ExperimentReport:
    """Simulate ``cfg.trials`` noisy rotated templates and estimate their angle.

    Trial ``t`` draws its angle and its background from counter-based
    streams keyed by ``(cfg.seed, t)``, so results do not depend on the
    number of worker threads.
    """
    cfg.validate()
    started = time.perf_counter()
    pattern = load_pattern(cfg.pattern)
    if not pattern.is_analytic:
        raise ValueError("Monte Carlo runs need an analytic template")
    profile = make_profile(cfg.profile, cfg.log_sigma)
    grid = FrequencyGrid.square(cfg.size)
    max_n = 128
    candidates = list(range(0, max_n + 1))
    table = harmonic_coefficients(pattern, profile, candidates)
    sets = _harmonic_sets(cfg, table, pattern)
    union = sorted({n for s in sets for n in s})
    synth = PatternSynthesizer(pattern, grid, _support_band(profile, grid.nyquist))

    if cfg.sigma0 is not None:
        sigma0 = float(cfg.sigma0)
    else:
        sigma0 = snr_scale(synth.image(0.0), NoiseModel(cfg.gamma, 1.0), cfg.snr_db)
    model = NoiseModel(cfg.gamma, sigma0)
    sym = pattern.symmetry_order
    period = 2.0 * math.pi / sym
    bank = FilterBank(profile, tuple(union)) if union else None
    templates = [{n: table[n] for n in s} for s in sets]
    orders = [max(informative_order(c), 1) for c in templates]

    def trial(t: int):
        try:
            if cfg.theta_star is not None:
                theta = float(cfg.theta_star)
            else:
                theta = float(rng.stream(cfg.seed, rng.ANGLE, t).uniform(0.0, period))
            img = synth.image(theta)
            if sigma0 > 0:
                img = img + synthesize(model, cfg.size, cfg.seed, t)
            q = measure(img, bank)
            return [estimate_angle(q, c, k, theta_star=theta).wrapped_error for c, k in zip(templates, orders)]
        except SteerCrlbError as exc:
            raise TrialFailure(t, exc) from exc
        except (ValueError, ArithmeticError) as exc:
            raise TrialFailure(t, exc) from exc

    if not sets:
        errs = np.zeros((cfg.trials, 0))
    elif cfg.threads == 1:
        errs = np.array([trial(t) for t in range(cfg.trials)])
    else:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            errs = np.array(list(pool.map(trial, range(cfg.trials))))

    rows = []
    T = cfg.trials
    for j, s in enumerate(sets):
        e = errs[:, j]
        bias = float(np.mean(e))
        var = float(np.var(e))
        sq = e**2
        mse = float(np.mean(sq))
        crlb = crlb_single(table, profile, model, s) if sigma0 > 0 else 0.0
        ratio = mse / crlb if crlb > 0 and math.isfinite(crlb) else math.nan
        rows.append(ReportRow(len(s), bias, math.sqrt(var / T), var, mse, float(np.std(sq)) / math.sqrt(T),
                              crlb, ratio, tuple(s)))
    provenance = {"config": cfg.echo(), "seed": cfg.seed, "version": __version__, "sigma0": sigma0,
                  "kernel_backend": _backend()}
    return ExperimentReport(rows, provenance, time.perf_counter() - started, sigma0, errs)


def _backend() -> str:
    from .kernels import BACKEND
    return BACKEND


def _fmt(x: float) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return repr(x)
    return str(x)


def _json_value(x):
    if isinstance(x, float) and not math.isfinite(x):
        return _fmt(x)
    return x


def report_to_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.rows:
        w.writerow([r.n_harmonics] + [_fmt(getattr(r, c)) for c in CSV_COLUMNS[1:]])
    return buf.getvalue()


def report_to_json(report: ExperimentReport) -> str:
    rows = []
    for r in report.rows:
        d = {"harmonics": list(r.harmonics), "n_harmonics": r.n_harmonics}
        d.update({c: _json_value(getattr(r, c)) for c in CSV_COLUMNS[1:]})
        rows.append(d)
    doc = {"rows": rows, "provenance": report.provenance, "wall_time_s": report.wall_time_s,
           "sigma0": report.sigma0}
    return json.dumps(doc, indent=2, default=_json_value)


def emit_report(report: ExperimentReport, format: str = "csv", path=None) -> str:
    """Serialize ``report``; writes to ``path`` when given and returns the text."""
    if format == "csv":
        text = report_to_csv(report)
    elif format == "json":
        text = report_to_json(report)
    else:
        raise ValueError("format must be 'csv' or 'json'")
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write report to {path}: {exc}") from exc
    return text


def load_report_csv(text_or_path) -> list:
    """Parse a CSV report back into :class:`ReportRow` objects (harmonic sets are not in the CSV)."""
    text = str(text_or_path)
    if "\n" not in text and Path(text).exists():
        text = Path(text).read_text()
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append(ReportRow(int(rec["n_harmonics"]), *(float(rec[c]) for c in CSV_COLUMNS[1:])))
    return rows
