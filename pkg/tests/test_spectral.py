import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rftdyson.spectral import (SQRT_2PI, DeltaSpike, DomainError, DualGrid,
                               GridMismatchError, SpectralSignal, convolve,
                               convolve_kernel, forward_ft, inverse_ft, shift, sinc,
                               time_signal, unit_delta, window_spectrum,
                               windowed_sinc_spectrum)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
sizes = st.sampled_from([8, 16, 64, 128])
steps = st.floats(0.05, 5.0)


@st.composite
def signals(draw, domain="time"):
    n = draw(sizes)
    g = DualGrid(n, draw(steps))
    re = draw(arrays(float, n, elements=finite))
    im = draw(arrays(float, n, elements=finite))
    return SpectralSignal(g, re + 1j * im, domain)


@st.composite
def signal_pairs(draw):
    a = draw(signals("frequency"))
    g = a.grid
    re = draw(arrays(float, g.n_samples, elements=finite))
    im = draw(arrays(float, g.n_samples, elements=finite))
    return a, SpectralSignal(g, re + 1j * im, "frequency")


class TestGrid:
    def test_dual_spacing(self):
        g = DualGrid(256, 0.5)
        assert g.dw * g.dt * g.n_samples == pytest.approx(2 * np.pi)
        assert g.times[g.n_samples // 2] == 0.0
        assert g.omegas[g.n_samples // 2] == 0.0
        assert g.w_min == -128 * g.dw and g.w_max == 127 * g.dw

    @pytest.mark.parametrize("n", [7, 100, 4])
    def test_rejects_bad_sizes(self, n):
        with pytest.raises(ValueError):
            DualGrid(n, 1.0)

    def test_rejects_bad_step(self):
        with pytest.raises(ValueError):
            DualGrid(64, 0.0)

    def test_from_dw(self):
        g = DualGrid.from_dw(512, 0.125)
        assert g.dw == pytest.approx(0.125)

    def test_alignment_and_steps(self):
        g = DualGrid(64, 1.0)
        assert g.is_aligned(5 * g.dw)
        assert not g.is_aligned(5.5 * g.dw)
        assert g.steps_of(16.0) == 16
        with pytest.raises(ValueError):
            g.steps_of(16.5)


class TestTransform:
    @settings(max_examples=60, deadline=None)
    @given(signals())
    def test_round_trip(self, s):
        back = inverse_ft(forward_ft(s))
        scale = max(1.0, np.abs(s.values).max())
        assert np.abs(back.values - s.values).max() <= 1e-10 * scale

    @settings(max_examples=60, deadline=None)
    @given(signals())
    def test_parseval(self, s):
        e_t = np.sum(np.abs(s.values) ** 2) * s.grid.dt
        e_w = np.sum(np.abs(forward_ft(s).values) ** 2) * s.grid.dw
        assert e_w == pytest.approx(e_t, rel=1e-10, abs=1e-300)

    def test_gaussian_is_self_dual(self):
        g = DualGrid(1024, 0.05)
        s = time_signal(g, np.exp(-g.times ** 2 / 2))
        want = np.exp(-g.omegas ** 2 / 2)
        assert np.abs(forward_ft(s).values - want).max() < 1e-12

    def test_sign_convention(self):
        # exp(-i a t) transforms to a spike at +a
        g = DualGrid(256, 0.25)
        a = 10 * g.dw
        X = forward_ft(time_signal(g, np.exp(-1j * a * g.times)))
        assert g.omegas[np.argmax(np.abs(X.values))] == pytest.approx(a)

    def test_constant_is_delta(self):
        # 1 -> sqrt(2 pi) delta(w); one bin of height 1/dw
        g = DualGrid(128, 0.3)
        X = forward_ft(time_signal(g, np.ones(128)))
        assert X.values[64] * g.dw == pytest.approx(SQRT_2PI)
        assert np.abs(np.delete(X.values, 64)).max() < 1e-12

    def test_domain_checks(self):
        g = DualGrid(16, 1.0)
        s = time_signal(g, np.ones(16))
        with pytest.raises(DomainError):
            inverse_ft(s)
        with pytest.raises(DomainError):
            forward_ft(forward_ft(s))


class TestConvolution:
    @settings(max_examples=40, deadline=None)
    @given(signal_pairs())
    def test_commutes(self, pair):
        a, b = pair
        ab, ba = convolve(a, b).values, convolve(b, a).values
        scale = max(1.0, np.abs(ab).max())
        assert np.abs(ab - ba).max() <= 1e-9 * scale

    @settings(max_examples=40, deadline=None)
    @given(signal_pairs(), st.complex_numbers(max_magnitude=10, allow_nan=False))
    def test_linear(self, pair, c):
        a, b = pair
        lhs = convolve(a.scaled(c) + b, b).values
        rhs = c * convolve(a, b).values + convolve(b, b).values
        scale = max(1.0, np.abs(rhs).max())
        assert np.abs(lhs - rhs).max() <= 1e-9 * scale

    def test_delta_is_identity(self):
        g = DualGrid(64, 1.0)
        rng = np.random.default_rng(3)
        a = SpectralSignal(g, rng.standard_normal(64))
        out = convolve(a, unit_delta(g, 0.0))
        assert np.allclose(out.values, a.values, atol=1e-12)

    def test_delta_shift_matches_shift(self):
        g = DualGrid(64, 1.0)
        a = SpectralSignal(g, np.exp(-g.omegas ** 2))
        w = 5 * g.dw
        assert np.allclose(convolve(a, unit_delta(g, w)).values, shift(a, w).values,
                           atol=1e-12)

    def test_no_wraparound(self):
        # mass pushed off the top edge must not reappear at the bottom
        g = DualGrid(32, 1.0)
        a = SpectralSignal(g, unit_delta(g, g.w_max).values)
        out = convolve(a, unit_delta(g, 4 * g.dw))
        assert np.abs(out.values).max() < 1e-12

    def test_kernel_matches_sampled_convolution(self):
        g = DualGrid(128, 1.0)
        vals = np.exp(-(g.omegas / (8 * g.dw)) ** 2)
        kern = lambda x: np.exp(-(x / (5 * g.dw)) ** 2)  # noqa: E731
        direct = np.array([np.sum(vals * kern(w - g.omegas)) * g.dw for w in g.omegas])
        assert np.allclose(convolve_kernel(vals, g, kern), direct, atol=1e-12)

    def test_grid_mismatch(self):
        a = SpectralSignal(DualGrid(16, 1.0), np.ones(16))
        b = SpectralSignal(DualGrid(16, 2.0), np.ones(16))
        with pytest.raises(GridMismatchError):
            convolve(a, b)


class TestPrimitives:
    def test_sinc_branches_meet(self):
        x = np.array([0.0, 9.99e-5, 1.0001e-4, 1.0])
        assert np.allclose(sinc(x), np.sinc(x / np.pi), rtol=1e-14)

    @pytest.mark.parametrize("r", [0.0, -3.0, 2.5])
    def test_window_spectrum_is_integral(self, r):
        T, w = 4.0, 1.3
        t = np.linspace(r, r + T, 200001)
        f = np.exp(1j * w * t)
        num = np.sum((f[1:] + f[:-1]) / 2) * (t[1] - t[0])
        assert window_spectrum(w, T, r) == pytest.approx(num, rel=1e-9)

    def test_window_spectrum_peak(self):
        g = DualGrid(64, 1.0)
        W = windowed_sinc_spectrum(8.0, 0.0, g)
        assert W.at(0.0) == pytest.approx(8.0)
        with pytest.raises(ValueError):
            windowed_sinc_spectrum(65.0, 0.0, g)

    def test_unit_delta_weight(self):
        g = DualGrid(32, 0.5)
        d = unit_delta(g, 3 * g.dw)
        assert d.values.sum() * g.dw == pytest.approx(1.0)
        with pytest.raises(ValueError):
            unit_delta(g, 0.5 * g.dw)

    def test_spike_render_and_snap(self):
        g = DualGrid(32, 1.0)
        sp = DeltaSpike(2.2 * g.dw, 2.0).snapped(g)
        assert sp.center == pytest.approx(2 * g.dw)
        assert sp.render(g).at(2 * g.dw) * g.dw == pytest.approx(2.0)

    def test_shift_edges(self):
        g = DualGrid(16, 1.0)
        s = SpectralSignal(g, np.arange(16.0))
        assert shift(s, 3 * g.dw).values[3] == 0.0
        assert shift(s, -3 * g.dw).values[0] == 3.0
        assert not shift(s, 20 * g.dw).values.any()

    def test_signal_validation(self):
        g = DualGrid(8, 1.0)
        with pytest.raises(ValueError):
            SpectralSignal(g, np.ones(9))
        with pytest.raises(FloatingPointError):
            SpectralSignal(g, np.full(8, np.nan))
        with pytest.raises(DomainError):
            SpectralSignal(g, np.ones(8), "space")

    def test_signal_is_immutable(self):
        s = SpectralSignal(DualGrid(8, 1.0), np.ones(8))
        with pytest.raises(ValueError):
            s.values[0] = 2.0
