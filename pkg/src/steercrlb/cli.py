"""Command-line interface: ``steercrlb <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import __version__
from .crlb import crlb_curve, canonical_strategy
from .errors import SteerCrlbError
from .harness import ExperimentConfig, emit_report, run_monte_carlo
from .noise import NoiseModel, synthesize
from .patterns import DEFAULT_N_MAX, harmonic_coefficients, load_pattern, wavelet_coefficients, write_raster
from .radial import FAMILIES, excluded_gamma, make_profile
from .wavelet_crlb import wavelet_crlb_curve, wavelet_scales


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return repr(x)
    return str(x)


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return _fmt(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    return x


def _table_out(args, header, rows, meta=None) -> str:
    if args.format == "json":
        doc = {"rows": [dict(zip(header, r)) for r in rows]}
        if meta:
            doc["meta"] = meta
        text = json.dumps(_jsonable(doc), indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        text = buf.getvalue()
    _write(args, text)
    return text


def _write(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> list:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            a, b = part.split("..")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _profile(args):
    return make_profile(args.profile, args.log_sigma)


def cmd_harmonics(args):
    pattern = load_pattern(args.pattern)
    profile = _profile(args)
    ns = _int_list(args.harmonics) if args.harmonics else list(range(-args.n_max, args.n_max + 1))
    if args.scales:
        scales = wavelet_scales(args.scales, args.direction)
        table = wavelet_coefficients(pattern, profile, ns, scales)
        rows = [(n, i, table[(n, i)].real, table[(n, i)].imag, abs(table[(n, i)])) for n, i in sorted(table.keys())]
        return _table_out(args, ("n", "scale", "re", "im", "abs"), rows)
    table = harmonic_coefficients(pattern, profile, ns)
    rows = [(n, table[n].real, table[n].imag, abs(table[n])) for n in sorted(table.keys())]
    return _table_out(args, ("n", "re", "im", "abs"), rows)


def cmd_crlb_single(args):
    pattern = load_pattern(args.pattern)
    profile = _profile(args)
    model = NoiseModel(args.gamma, args.sigma0)
    strategy = canonical_strategy(args.strategy)
    k = args.k if args.k is not None else pattern.symmetry_order
    if strategy == "kfold":
        reach = args.n_max * k
    elif strategy == "best_n":
        reach = max(args.n_max, DEFAULT_N_MAX)
    else:
        reach = args.n_max
    table = harmonic_coefficients(pattern, profile, range(0, reach + 1))
    report = crlb_curve(table, profile, model, strategy, args.n_max, k)
    rows = [(N, ";".join(map(str, hs)), c) for N, hs, c in zip(report.counts, report.harmonic_sets, report.crlb)]
    meta = {"strategy": strategy, "gamma": args.gamma, "sigma0": args.sigma0, "profile": profile.profile_id}
    return _table_out(args, ("N", "harmonics", "crlb_rad2"), rows, meta)


def cmd_crlb_wavelet(args):
    pattern = load_pattern(args.pattern)
    profile = _profile(args)
    model = NoiseModel(args.gamma, args.sigma0)
    report = wavelet_crlb_curve(pattern, profile, model, _int_list(args.harmonics), args.scales, args.direction)
    rows = list(zip(report.counts, report.crlb, report.lower, report.upper))
    meta = {"gamma": args.gamma, "sigma0": args.sigma0, "profile": profile.profile_id,
            "direction": args.direction, "harmonics": list(report.harmonic_sets[0])}
    return _table_out(args, ("S", "crlb_exact", "crlb_lower", "crlb_upper"), rows, meta)


def cmd_excluded_gamma(args):
    names = [args.profile] if args.profile else ["meyer", "shannon", "simoncelli"]
    rows = [(name, excluded_gamma(make_profile(name), args.measure)) for name in names]
    return _table_out(args, ("profile", "excluded_gamma"), rows)


def cmd_noise(args):
    if not args.out:
        raise SystemExit("noise: --out is required")
    field = synthesize(NoiseModel(args.gamma, args.sigma0), args.size, args.seed)
    sidecar = write_raster(args.out, field, gamma=args.gamma, sigma0=args.sigma0, seed=args.seed)
    sys.stdout.write(f"wrote {args.out} and {sidecar}\n")


def cmd_simulate(args):
    sets = tuple(tuple(_int_list(s)) for s in args.harmonic_sets.split(";")) if args.harmonic_sets else ()
    counts = tuple(range(1, args.n_max + 1)) if not sets else ()
    doc = args.pattern
    if isinstance(doc, str) and not doc.lstrip().startswith("{"):
        doc = json.loads(Path(doc).read_text())
    elif isinstance(doc, str):
        doc = json.loads(doc)
    cfg = ExperimentConfig(
        pattern=doc, profile=args.profile, log_sigma=args.log_sigma, gamma=args.gamma,
        snr_db=args.snr_db, sigma0=args.sigma0, trials=args.trials, strategy=args.strategy,
        counts=counts, harmonic_sets=sets, size=args.size, seed=args.seed,
        theta_star=args.theta_star, threads=args.threads,
    )
    report = run_monte_carlo(cfg)
    text = emit_report(report, args.format, args.out or None)
    if not args.out:
        sys.stdout.write(text)
    return text


def _add_profile(p):
    p.add_argument("--profile", default="meyer", choices=FAMILIES)
    p.add_argument("--log-sigma", type=float, default=2.0, help="scale of the LoG profile")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="steercrlb", parents=[common],
                                     description="Angular Cramér-Rao bounds for steerable detectors")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("harmonics", parents=[common], help="dump a coefficient table")
    p.add_argument("--pattern", required=True, help="pattern JSON text or file")
    _add_profile(p)
    p.add_argument("--n-max", type=int, default=60)
    p.add_argument("--harmonics", help="explicit list, e.g. 3,6,9 or -10..10")
    p.add_argument("--scales", type=int, default=0, help="number of wavelet scales (0: single scale)")
    p.add_argument("--direction", choices=("finer", "coarser"), default="finer")
    p.set_defaults(func=cmd_harmonics)

    pc = sub.add_parser("crlb", help="angular CRLB curves")
    csub = pc.add_subparsers(dest="mode", required=True)
    p = csub.add_parser("single", parents=[common], help="single-scale CRLB versus number of harmonics")
    p.add_argument("--pattern", required=True)
    _add_profile(p)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--sigma0", type=float, default=1.0)
    p.add_argument("--strategy", default="best", help="first | best | kfold")
    p.add_argument("--k", type=int, help="symmetry order for kfold (default: the template's)")
    p.add_argument("--n-max", type=int, default=60)
    p.set_defaults(func=cmd_crlb_single)

    p = csub.add_parser("wavelet", parents=[common], help="wavelet CRLB versus number of scales")
    p.add_argument("--pattern", required=True)
    _add_profile(p)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--sigma0", type=float, default=1.0)
    p.add_argument("--harmonics", required=True, help="e.g. 3,6,9")
    p.add_argument("--scales", type=int, required=True, help="largest number of scales S")
    p.add_argument("--direction", choices=("finer", "coarser"), default="finer")
    p.set_defaults(func=cmd_crlb_wavelet)

    p = sub.add_parser("excluded-gamma", parents=[common], help="excluded noise orders of the bandpass profiles")
    p.add_argument("--profile", choices=("meyer", "shannon", "simoncelli"))
    p.add_argument("--measure", choices=("line", "plane"), default="line")
    p.set_defaults(func=cmd_excluded_gamma)

    p = sub.add_parser("noise", parents=[common], help="synthesize a background field")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--sigma0", type=float, default=1.0)
    p.add_argument("--size", type=int, default=256)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo check of the single-scale CRLB")
    p.add_argument("--pattern", required=True)
    _add_profile(p)
    p.add_argument("--gamma", type=float, required=True)
    level = p.add_mutually_exclusive_group(required=True)
    level.add_argument("--snr-db", type=float)
    level.add_argument("--sigma0", type=float)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--strategy", default="kfold")
    p.add_argument("--n-max", type=int, default=6, help="evaluate N = 1..n-max harmonics")
    p.add_argument("--harmonic-sets", help="explicit sets, e.g. '3;3,6;3,6,9'")
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--theta-star", type=float, help="fix the true angle instead of drawing it per trial")
    p.set_defaults(func=cmd_simulate)
    return parser


_GLOBAL_DEFAULTS = {"seed": 0, "threads": 1, "out": None, "format": "csv"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, val in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, val)
    try:
        args.func(args)
    except (SteerCrlbError, ValueError, OSError) as exc:
        sys.stderr.write(f"steercrlb: error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
