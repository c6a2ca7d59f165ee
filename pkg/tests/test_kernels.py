import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from steercrlb import kernels

compiled = pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")


def problem(seed, m=4):
    rng = np.random.default_rng(seed)
    ns = np.sort(rng.choice(np.arange(1, 13), size=m, replace=False)).astype(np.int64)
    return ns, rng.standard_normal(m), rng.standard_normal(m)


def test_python_response_matches_numpy():
    ns, re, im = problem(0)
    theta = 0.37
    ref = np.sum(re * np.cos(ns * theta) + im * np.sin(ns * theta))
    assert kernels.python.response(ns, re, im, theta) == pytest.approx(ref, rel=1e-14)


def test_python_golden_finds_peak():
    ns, re, im = problem(1)
    t = kernels.python.maximize_response(ns, re, im, 2 * math.pi, 1024, 1e-9)
    grid = np.linspace(0, 2 * math.pi, 200001)
    vals = (re[:, None] * np.cos(ns[:, None] * grid) + im[:, None] * np.sin(ns[:, None] * grid)).sum(0)
    assert kernels.python.response(ns, re, im, t) >= vals.max() - 1e-9


@compiled
@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 8))
def test_backend_parity(seed, m):
    ns, re, im = problem(seed, m)
    for theta in (0.0, 0.5, 3.0):
        assert kernels.compiled.response(ns, re, im, theta) == pytest.approx(
            kernels.python.response(ns, re, im, theta), rel=1e-12, abs=1e-12)
    assert kernels.compiled.grid_argmax(ns, re, im, 2.0, 256) == kernels.python.grid_argmax(ns, re, im, 2.0, 256)
    a = kernels.compiled.maximize_response(ns, re, im, 2 * math.pi, 1024, 1e-7)
    b = kernels.python.maximize_response(ns, re, im, 2 * math.pi, 1024, 1e-7)
    assert a == pytest.approx(b, abs=1e-9)


def test_backend_name():
    assert kernels.BACKEND == ("cython" if kernels.compiled is not None else "python")


def test_pure_switch():
    env = dict(os.environ, STEERCRLB_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import steercrlb.kernels as k; print(k.BACKEND, k.compiled)"],
                         env=env, capture_output=True, text=True, check=True).stdout.split()
    assert out == ["python", "None"]
