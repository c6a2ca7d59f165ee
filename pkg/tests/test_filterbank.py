import numpy as np
import pytest

from steercrlb.errors import DuplicateIndex, IndexMismatch, NyquistViolation
from steercrlb.filterbank import (
    FilterBank, MeasurementVector, measure, measure_spectrum, project_pattern, render_filter, steer_response,
)
from steercrlb.grid import FrequencyGrid, to_spectrum
from steercrlb.patterns import Pattern, harmonic_coefficients, synthesize_pattern_image, wavelet_coefficients


@pytest.fixture(scope="module")
def noisy_image():
    return np.random.default_rng(7).standard_normal((128, 128))


def test_zero_image(meyer):
    q = measure(np.zeros((64, 64)), FilterBank(meyer, (1, 2, 3)))
    assert all(v == 0 for v in q.entries.values())


@pytest.mark.parametrize("size", [128, 256])
def test_orthonormal(meyer, size):
    g = FrequencyGrid.square(size)
    bank = FilterBank(meyer, tuple(range(-12, 13)))
    S = np.stack([bank.filter_spectrum(k, g).ravel() for k in bank.keys])
    gram = np.conj(S) @ S.T / g.n_pixels
    assert np.max(np.abs(gram - np.eye(len(bank.keys)))) <= 1e-8


def test_orthonormal_across_scales(meyer):
    # filters at scales two apart have disjoint supports; adjacent ones overlap
    g = FrequencyGrid.square(256)
    bank = FilterBank(meyer, (3,), scales=(0, 1, 2))
    S = np.stack([bank.filter_spectrum(k, g).ravel() for k in bank.keys])
    gram = np.conj(S) @ S.T / g.n_pixels
    assert np.allclose(np.diag(gram), 1.0, atol=1e-8)
    assert gram[0, 2] == 0
    assert abs(gram[0, 1]) > 0.1


@pytest.mark.parametrize("theta", [0.0, 0.7])
def test_noiseless_measurement(meyer, theta):
    ns = tuple(range(-15, 16))
    u = harmonic_coefficients(Pattern("J2"), meyer, ns)
    q = measure(synthesize_pattern_image(Pattern("J2"), theta, 256), FilterBank(meyer, ns))
    scale = max(abs(u[n]) for n in ns)
    for n in ns:
        assert abs(q[n] - np.exp(1j * n * theta) * u[n]) <= 1e-6 * scale


def test_hermitian_measurements(meyer, noisy_image):
    q = measure(noisy_image, FilterBank(meyer, tuple(range(-10, 11))))
    for n in range(1, 11):
        assert abs(q[-n] - np.conj(q[n])) <= 1e-13 * abs(q[n])


def test_measure_spectrum_matches(meyer, noisy_image):
    bank = FilterBank(meyer, (1, 4))
    a = measure(noisy_image, bank)
    b = measure_spectrum(to_spectrum(noisy_image), bank)
    assert a.entries == b.entries


def test_nyquist_violation(meyer):
    with pytest.raises(NyquistViolation):
        measure(np.zeros((64, 64)), FilterBank(meyer, (3,)), pitch=2.0)
    with pytest.raises(NyquistViolation):
        measure(np.zeros((64, 64)), FilterBank(meyer, (3,), scales=(-1, 0)))


def test_duplicates(meyer):
    with pytest.raises(DuplicateIndex):
        FilterBank(meyer, (3, 3))


def test_rotation_covariance_of_filters(meyer):
    g = FrequencyGrid.square(64)
    bank = FilterBank(meyer, (5,))
    base = render_filter({5: 1.0}, bank, g)
    for theta in (0.3, 1.9):
        rot = render_filter({5: 1.0}, bank, g, theta)
        assert np.allclose(rot, np.exp(-1j * 5 * theta) * base, atol=1e-14)


class TestSteering:
    def test_single_pair_argmax(self, meyer):
        u = {3: 0.2 - 0.1j}
        theta_star = 0.9
        q = MeasurementVector({3: np.exp(3j * theta_star) * u[3]})
        grid = np.linspace(0, 2 * np.pi / 3, 3001)
        vals = [steer_response(q, u, t) for t in grid]
        assert grid[int(np.argmax(vals))] == pytest.approx(theta_star, abs=2e-3)
        assert steer_response(q, u, theta_star) == pytest.approx(2 * abs(u[3]) ** 2, rel=1e-14)

    def test_identity(self):
        q = MeasurementVector({0: 0.5, 2: 1 + 1j, 5: -0.3j})
        c = {0: 1.0, 2: 0.5 - 0.2j, 5: 1j}
        direct = 0.5 + 2 * np.real((1 + 1j) * np.conj(0.5 - 0.2j) + (-0.3j) * np.conj(1j))
        assert steer_response(q, c, 0.0) == pytest.approx(direct, rel=1e-15)

    def test_full_set_equals_completion(self):
        q = MeasurementVector({-2: 1 - 1j, 2: 1 + 1j, -3: 2j, 3: -2j})
        c_half = {2: 0.3 + 0.1j, 3: 0.5}
        c_full = {2: 0.3 + 0.1j, -2: 0.3 - 0.1j, 3: 0.5, -3: 0.5}
        for t in (0.0, 0.4, 2.2):
            assert steer_response(q, c_full, t) == pytest.approx(steer_response(q, c_half, t), rel=1e-14)

    def test_index_mismatch(self):
        q = MeasurementVector({3: 1.0})
        with pytest.raises(IndexMismatch):
            steer_response(q, {4: 1.0}, 0.0)
        q = MeasurementVector({3: 1.0, -3: 1.0})
        with pytest.raises(IndexMismatch):
            steer_response(q, {-3: 1.0}, 0.0)

    def test_against_rendered_rotated_filter(self, meyer, noisy_image):
        ns = (0, 1, 2, 3, 5, 8)
        bank = FilterBank(meyer, ns)
        full = FilterBank(meyer, tuple(sorted({-n for n in ns} | set(ns))))
        rng = np.random.default_rng(3)
        c = {n: complex(rng.standard_normal(), rng.standard_normal() if n else 0.0) for n in ns}
        q = measure(noisy_image, bank)
        conj_c = {}
        for n, v in c.items():
            conj_c[n] = np.conj(v)
            conj_c[-n] = v
        g = FrequencyGrid.square(128)
        for theta in rng.uniform(0, 2 * np.pi, 8):
            filt = render_filter(conj_c, full, g, theta)
            assert np.abs(filt.imag).max() <= 1e-12 * np.abs(filt.real).max()
            direct = float(np.sum(noisy_image * filt.real))
            assert steer_response(q, c, theta) == pytest.approx(direct, rel=1e-6)


def test_project_pattern(meyer):
    bank = FilterBank(meyer, (3, 6, 9))
    c = project_pattern(Pattern("J1"), bank)
    u = harmonic_coefficients(Pattern("J1"), meyer, (3, 6, 9))
    assert c.entries == u.entries
    wb = FilterBank(meyer, (3, 6), scales=(0, 1))
    assert project_pattern(Pattern("J2"), wb).entries == wavelet_coefficients(Pattern("J2"), meyer, (3, 6), (0, 1)).entries


def test_project_basis_filter(meyer):
    g = FrequencyGrid.square(256)
    img = render_filter({0: 1.0}, FilterBank(meyer, (0,)), g).real
    c = project_pattern(Pattern("raster", raster=img), FilterBank(meyer, (0, 1, 2, 3)))
    assert c[0] == pytest.approx(1.0, rel=1e-3)
    assert max(abs(c[n]) for n in (1, 2, 3)) <= 1e-3


def test_normalized_measurements(meyer, noisy_image):
    q = measure(noisy_image, FilterBank(meyer, (3,), scales=(0, 1, 2)))
    qt = q.normalized(2.5)
    for i in (0, 1, 2):
        assert qt[(3, i)] == q[(3, i)] * 2.0 ** (-2.5 * i)
