import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rftdyson.analysis import (compare, fwhm, inverse_law_fit, linear_fit, peak_omega,
                               zero_crossings)
from rftdyson.spectral import DualGrid, GridMismatchError, SpectralSignal

G = DualGrid(64, 1.0)


def bump(center=0.0):
    return SpectralSignal(G, np.exp(-((G.omegas - center) / (4 * G.dw)) ** 2))


class TestCompare:
    def test_identical(self):
        rep = compare(bump(), bump(), "x", "y")
        assert rep.relative_l2 == 0.0 and rep.max_abs_diff == 0.0
        assert rep.peak_location_diff_bins == 0

    def test_double_is_one(self):
        assert compare(bump().scaled(2.0), bump()).relative_l2 == pytest.approx(1.0)

    def test_peak_offset_in_bins(self):
        assert compare(bump(3 * G.dw), bump()).peak_location_diff_bins == 3

    def test_zero_reference(self):
        zero = SpectralSignal(G, np.zeros(64))
        assert compare(zero, zero).relative_l2 == 0.0
        assert compare(bump(), zero).relative_l2 == float("inf")

    def test_grid_mismatch(self):
        other = SpectralSignal(DualGrid(64, 2.0), np.ones(64))
        with pytest.raises(GridMismatchError):
            compare(bump(), other)

    def test_report_text(self):
        text = compare(bump(), bump(), "rft", "oracle").to_text()
        rows = dict(line.split("\t") for line in text.splitlines())
        assert rows["method_a"] == "rft" and rows["relative_l2"] == "0.0"
        assert set(rows) >= {"max_abs_diff", "peak_location_diff_bins", "runtime_a"}


def test_peak_omega():
    assert peak_omega(bump(-5 * G.dw)) == pytest.approx(-5 * G.dw)


class TestFwhm:
    @settings(max_examples=30)
    @given(st.floats(0.5, 5.0))
    def test_gaussian(self, s):
        x = np.linspace(-40, 40, 8001)
        y = np.exp(-x ** 2 / (2 * s ** 2))
        assert fwhm(x, y) == pytest.approx(2 * s * np.sqrt(2 * np.log(2)), rel=1e-4)

    def test_triangle_is_exact(self):
        x = np.arange(-4.0, 5.0)
        assert fwhm(x, np.maximum(0, 3 - np.abs(x))) == pytest.approx(3.0)

    def test_edge_peak_rejected(self):
        with pytest.raises(ValueError):
            fwhm(np.arange(5.0), np.array([5.0, 4, 1, 0, 0]))


class TestZeroCrossings:
    def test_sine(self):
        x = np.linspace(0, 4 * np.pi, 4001)
        all_ = zero_crossings(x, np.sin(x + 0.3))
        assert np.allclose(all_, np.arange(1, 5) * np.pi - 0.3, atol=1e-6)
        up = zero_crossings(x, np.sin(x + 0.3), rising=True)
        assert np.allclose(up, [2 * np.pi - 0.3, 4 * np.pi - 0.3], atol=1e-6)
        down = zero_crossings(x, np.sin(x + 0.3), rising=False)
        assert np.allclose(down, [np.pi - 0.3, 3 * np.pi - 0.3], atol=1e-6)

    def test_none(self):
        assert zero_crossings(np.arange(4.0), np.ones(4)).size == 0


class TestFits:
    def test_line(self):
        x = np.arange(10.0)
        coef, r2 = linear_fit(x, 3 * x - 2)
        assert np.allclose(coef, [3, -2]) and r2 == pytest.approx(1.0)

    def test_through_origin(self):
        coef, r2 = linear_fit([1, 2, 3], [2, 4, 6], through_origin=True)
        assert coef[0] == pytest.approx(2.0) and r2 == pytest.approx(1.0)

    def test_noisy_fit_below_one(self):
        rng = np.random.default_rng(0)
        x = np.arange(50.0)
        _, r2 = linear_fit(x, x + 5 * rng.standard_normal(50))
        assert 0.5 < r2 < 1.0

    def test_inverse_law(self):
        k = np.array([-6, -3, 2, 4, 9])
        c, r2, worst = inverse_law_fit(k, 1.7 / np.abs(k))
        assert c == pytest.approx(1.7) and r2 == pytest.approx(1.0) and worst < 1e-12

    def test_inverse_law_deviation(self):
        k = np.array([2, 3, 4])
        _, _, worst = inverse_law_fit(k, np.array([0.5, 1 / 3, 0.3]))
        assert worst > 0.1
