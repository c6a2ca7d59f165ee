"""Time the compiled and pure-Python angle-search kernels on the same inputs.

Run with ``python benchmarks/bench_kernels.py [--repeat R] [--harmonics M]``.
"""

import argparse
import math
import timeit

import numpy as np

from steercrlb import kernels


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--harmonics", type=int, default=6)
    ap.add_argument("--grid", type=int, default=1024)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    ns = np.arange(3, 3 * args.harmonics + 1, 3, dtype=np.int64)
    re, im = rng.standard_normal(ns.size), rng.standard_normal(ns.size)
    period = 2 * math.pi / 3

    backends = [("python", kernels.python)]
    if kernels.compiled is not None:
        backends.append(("cython", kernels.compiled))
    else:
        print("compiled kernels unavailable; timing the Python fallback only")

    timings = {}
    for name, mod in backends:
        call = lambda: mod.maximize_response(ns, re, im, period, args.grid, 1e-7)  # noqa: E731
        number = 3 if name == "python" else 200
        best = min(timeit.repeat(call, number=number, repeat=args.repeat)) / number
        timings[name] = best
        print(f"{name:>7}: {best * 1e3:9.4f} ms per search ({ns.size} harmonics, grid {args.grid})")
    if len(timings) == 2:
        print(f"speed-up: {timings['python'] / timings['cython']:.1f}x")


if __name__ == "__main__":
    main()
