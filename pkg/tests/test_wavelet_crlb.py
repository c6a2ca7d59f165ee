import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from steercrlb.crlb import crlb_single
from steercrlb.errors import DuplicateIndex, ExcludedGamma, GroupingMismatch
from steercrlb.noise import NoiseModel
from steercrlb.patterns import HarmonicTable, Pattern, harmonic_coefficients, wavelet_coefficients
from steercrlb.radial import SpectralConstants, excluded_gamma, noise_constants
from steercrlb.wavelet_crlb import (
    Group, TridiagonalBlock, block_eigensystem, crlb_bounds, fisher_bruteforce, fisher_wavelet, group_indices,
    wavelet_crlb_curve, wavelet_dense_problem, wavelet_scales,
)
from tests import oracles


class TestGrouping:
    def test_example(self):
        gr = group_indices([(2, 0), (2, 1), (2, 3), (5, 1)])
        assert gr.groups == (Group(2, 0, 2), Group(2, 3, 1), Group(5, 1, 1))
        assert gr.g == 3

    def test_singleton(self):
        assert group_indices([(3, 0)]).groups == (Group(3, 0, 1),)

    def test_consecutive_merge(self):
        assert group_indices([(3, 2), (3, 0), (3, 1)]).groups == (Group(3, 0, 3),)

    def test_duplicates(self):
        with pytest.raises(DuplicateIndex):
            group_indices([(3, 0), (3, 0)])

    def test_negative_folding(self):
        assert group_indices([(3, 0), (-3, 0), (0, 1), (-4, 2)]).groups == (Group(3, 0, 1), Group(4, 2, 1))

    @settings(max_examples=100, deadline=None)
    @given(st.sets(st.tuples(st.integers(1, 5), st.integers(-4, 6)), min_size=1, max_size=25))
    def test_conditions_and_minimality(self, idx):
        gr = group_indices(idx)
        assert sorted(gr.indices()) == sorted(idx)
        by_n = {}
        for grp in gr.groups:
            by_n.setdefault(grp.n, []).append(grp)
        for n, grps in by_n.items():
            grps.sort(key=lambda x: x.start)
            for a, b in zip(grps, grps[1:]):
                # a merge would need consecutive scales
                assert b.start - (a.start + a.length - 1) >= 2
        # maximal runs: count scale breaks
        runs = 0
        for n in {n for n, _ in idx}:
            s = sorted(i for m, i in idx if m == n)
            runs += 1 + sum(1 for a, b in zip(s, s[1:]) if b != a + 1)
        assert gr.g == runs
        keys = [(grp.n, grp.start) for grp in gr.groups]
        assert keys == sorted(keys)


class TestEigen:
    def test_scalar(self):
        vals, vecs = block_eigensystem(TridiagonalBlock(1, 2.5, 0.7))
        assert vals.tolist() == [2.5] and vecs[0, 0] == pytest.approx(1.0)

    def test_two(self):
        vals, _ = block_eigensystem(TridiagonalBlock(2, 3.0, 1.0))
        assert sorted(vals) == pytest.approx([2.0, 4.0], rel=1e-15)

    @pytest.mark.parametrize("l,B,D", [(5, 3.0, 1.0), (6, 1.0, -0.49), (3, 1.0, 0.3)])
    def test_dense(self, l, B, D):
        vals, vecs = block_eigensystem(TridiagonalBlock(l, B, D))
        ref = np.linalg.eigvalsh(oracles.tridiagonal(l, B, D))
        assert np.sort(vals) == pytest.approx(ref, abs=1e-12)
        A = oracles.tridiagonal(l, B, D)
        assert np.allclose(A @ vecs, vecs * vals, atol=1e-12)
        assert np.allclose(vecs.T @ vecs, np.eye(l), atol=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(l=st.integers(1, 30), D=st.floats(-0.4999, 0.4999))
    def test_positive(self, l, D):
        vals, _ = block_eigensystem(TridiagonalBlock(l, 1.0, D))
        assert vals.min() == pytest.approx(1.0 - 2 * abs(D) * math.cos(math.pi / (l + 1)), abs=1e-12)
        assert vals.min() > 0


class TestFisher:
    def test_single_index(self):
        const = SpectralConstants(1.0, 0.2, 1.3, 0.2, 2.0, 1.0)
        t = HarmonicTable({(4, 1): 0.3 + 0.4j}, "x", "wavelet")
        fi = fisher_wavelet(t, const, group_indices([(4, 1)]))
        assert fi == pytest.approx(2 * 16 * 4.0 ** (-2.0) * 0.25 / 1.3, rel=1e-14)

    def test_shannon_collapse(self, shannon):
        const = noise_constants(shannon, 1.5, 1.0)
        t = wavelet_coefficients(Pattern("J2"), shannon, [3, 6], [0, 1, 2])
        gr = group_indices([(n, i) for n in (3, 6) for i in (0, 1, 2)])
        b = crlb_bounds(t, const, gr)
        assert b.lower == pytest.approx(b.exact, rel=1e-13) and b.upper == pytest.approx(b.exact, rel=1e-13)
        s = sum(2 * n * n * 4.0 ** (-i * 1.5) * abs(t[(n, i)]) ** 2 for n, i in gr.indices())
        assert fisher_wavelet(t, const, gr) == pytest.approx(s / const.B, rel=1e-13)

    @pytest.mark.parametrize("scales", [(0, 1, 2), (0, -1, -2)])
    def test_j2_against_dense(self, meyer, scales):
        const = noise_constants(meyer, 2.5, 1.0)
        t = wavelet_coefficients(Pattern("J2"), meyer, [3, 6], scales)
        idx = [(n, i) for n in (3, 6) for i in scales]
        dmu, C = wavelet_dense_problem(t, const, idx)
        assert fisher_wavelet(t, const, group_indices(idx)) == pytest.approx(oracles.fisher_dense(dmu, C), rel=1e-10)

    def test_randomized_oracle(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            t, const, idx = oracles.random_wavelet_instance(rng)
            gr = group_indices(idx)
            dmu, C = wavelet_dense_problem(t, const, idx)
            fi = fisher_wavelet(t, const, gr)
            assert fi == pytest.approx(oracles.fisher_dense(dmu, C), rel=1e-10)
            assert fi == pytest.approx(fisher_bruteforce(dmu, C), rel=1e-10)
            b = crlb_bounds(t, const, gr)
            assert b.lower <= b.exact * (1 + 1e-12) and b.exact <= b.upper * (1 + 1e-12)

    def test_theta_independence(self):
        rng = np.random.default_rng(5)
        t, const, idx = oracles.random_wavelet_instance(rng)
        vals = [fisher_bruteforce(*wavelet_dense_problem(t, const, idx, th)) for th in (0.0, 0.7, 2.1)]
        assert max(vals) - min(vals) <= 1e-12 * max(vals)

    def test_meyer_strict_sandwich(self, meyer):
        const = noise_constants(meyer, 2.5, 1.0)
        t = wavelet_coefficients(Pattern("J4"), meyer, [4, 8], [0, 1, 2, 3])
        gr = group_indices([(n, i) for n in (4, 8) for i in range(4)])
        b = crlb_bounds(t, const, gr)
        assert 0 < b.lower < b.exact < b.upper

    def test_homogeneity(self, meyer):
        const = noise_constants(meyer, 2.5, 1.0)
        t = wavelet_coefficients(Pattern("J2"), meyer, [3], [0, 1])
        gr = group_indices([(3, 0), (3, 1)])
        a, b = crlb_bounds(t, const, gr), crlb_bounds(t.scaled(3.0), const, gr)
        for x, y in ((a.lower, b.lower), (a.exact, b.exact), (a.upper, b.upper)):
            assert y == pytest.approx(x / 9, rel=1e-13)

    def test_excluded_gamma(self, meyer):
        g = excluded_gamma(meyer)
        const = noise_constants(meyer, g, 1.0)
        t = wavelet_coefficients(Pattern("J2"), meyer, [3], [0])
        with pytest.raises(ExcludedGamma):
            fisher_wavelet(t, const, group_indices([(3, 0)]))

    def test_mismatch(self):
        const = SpectralConstants(1.0, 0.0, 1.0, 0.0, 1.0, 1.0)
        t = HarmonicTable({(3, 0): 1.0}, "x", "wavelet")
        with pytest.raises(GroupingMismatch):
            fisher_wavelet(t, const, group_indices([(3, 0), (3, 1)]))

    def test_zero_table(self):
        const = SpectralConstants(1.0, 0.1, 1.0, 0.1, 1.0, 1.0)
        t = HarmonicTable({(3, 0): 0.0, (3, 1): 0.0}, "x", "wavelet")
        b = crlb_bounds(t, const, group_indices([(3, 0), (3, 1)]))
        assert b.exact == b.lower == b.upper == math.inf


class TestCurve:
    def test_shannon_single_scale(self, shannon):
        model = NoiseModel(1.5, 1.0)
        rep = wavelet_crlb_curve(Pattern("J2"), shannon, model, [3, 6, 9], 1)
        u = harmonic_coefficients(Pattern("J2"), shannon, [3, 6, 9])
        assert rep.crlb[0] == pytest.approx(crlb_single(u, shannon, model, [3, 6, 9]), rel=1e-12)

    def test_shapes(self, meyer):
        model = NoiseModel(2.5, 1.0)
        fast = np.array(wavelet_crlb_curve(Pattern("J2", lam=2.1), meyer, model, [3, 6, 9], 5).crlb)
        slow = np.array(wavelet_crlb_curve(Pattern("J2", lam=4.5), meyer, model, [3, 6, 9], 5).crlb)
        assert np.all(np.diff(fast) < 0)
        assert fast[-1] / fast[-2] < 0.5
        assert slow[-1] / slow[-2] > 0.99

    def test_bounds_in_report(self, meyer):
        rep = wavelet_crlb_curve(Pattern("J4"), meyer, NoiseModel(2.5, 1.0), [4, 8], 4, direction="coarser")
        for lo, ex, up in zip(rep.lower, rep.crlb, rep.upper):
            assert lo < ex < up
        assert rep.index_name == "S" and rep.extra["scales"] == (0, 1, 2, 3)

    def test_scales(self):
        assert wavelet_scales(3) == [0, -1, -2]
        assert wavelet_scales(3, "coarser") == [0, 1, 2]
        with pytest.raises(ValueError):
            wavelet_scales(0)
