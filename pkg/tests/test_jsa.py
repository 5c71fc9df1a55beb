import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rftdyson.jsa import (FwmConfig, FwmError, FwmQuadrature, jsa_direct, jsa_reference,
                          jsa_rft, ridge_peak, save_map, wave_mismatch)
from rftdyson.spectral import relative_l2

CFG = FwmConfig(gvd=0.02)


@pytest.fixture(scope="module")
def maps():
    return {"rft": jsa_rft(CFG), "direct": jsa_direct(CFG), "reference": jsa_reference(CFG)}


class TestMismatch:
    def test_degenerate_pair(self):
        assert wave_mismatch(3.0, 3.0, CFG) == 0.0

    @settings(max_examples=50)
    @given(st.floats(-50, 50), st.floats(-50, 50))
    def test_swap_symmetric(self, a, b):
        assert wave_mismatch(a, b, CFG) == wave_mismatch(b, a, CFG)

    def test_quadratic(self):
        assert wave_mismatch(2.0, 0.0, CFG) == pytest.approx(4 * wave_mismatch(1.0, 0.0, CFG))


class TestReference:
    def test_unit_peak(self):
        F = jsa_reference(FwmConfig())
        c = FwmConfig().map_size // 2
        assert abs(F[c, c]) == pytest.approx(1.0)

    def test_gaussian_half_amplitude_contour(self):
        # choose sigma so nu = 2 sigma sqrt(ln 2) falls on the lattice
        step, n = 0.125, 16
        cfg = FwmConfig(pump_sigma=n * step / (2 * np.sqrt(np.log(2))), map_step=step)
        F = jsa_reference(cfg)
        c = cfg.map_size // 2
        # nu = (js + ji - 2c) * step; walk along the signal axis
        assert abs(F[c + n, c]) == pytest.approx(0.5, rel=1e-12)
        assert abs(F[c - n, c]) == pytest.approx(0.5, rel=1e-12)

    def test_phase_matching_zero(self):
        # 2 gamma P L / 2 = pi puts the whole map on a sinc zero
        F = jsa_reference(FwmConfig(gamma_p=np.pi))
        assert np.abs(F).max() < 1e-15

    def test_needs_fiber_approximation(self):
        with pytest.raises(FwmError):
            jsa_reference(FwmConfig(gvd=2.0))


class TestRft:
    def test_asymptotic_window_matches_closed_form(self):
        assert relative_l2(jsa_rft(CFG, pump_dispersion=False), jsa_reference(CFG)) < 1e-3

    def test_separable_when_mismatch_vanishes(self):
        cfg = FwmConfig()
        F = jsa_rft(cfg)
        # every anti-diagonal is constant: F depends on w_s + w_idl only
        js, ji = np.indices(F.shape)
        for s in (cfg.map_size - 1, cfg.map_size, cfg.map_size + 7):
            line = F[js + ji == s]
            assert np.abs(line - line[0]).max() < 1e-14

    def test_finite_window_cut_matches_quadrature(self):
        cfg = FwmConfig(gvd=0.02, T0=CFG.sum_grid.t_total / 12)
        assert abs(cfg.T0 - 4 / cfg.pump_sigma) < 0.2
        rft = jsa_rft(cfg)
        direct = jsa_direct(cfg, FwmQuadrature(256, 2048))
        c = cfg.map_size // 2
        cut = np.arange(cfg.map_size)
        assert relative_l2(rft[cut, c], direct[cut, c]) < 1e-2

    def test_window_must_divide_span(self):
        with pytest.raises(FwmError):
            jsa_rft(FwmConfig(T0=4.0))


class TestDirect:
    def test_against_rft(self, maps):
        assert relative_l2(maps["rft"], maps["direct"]) < 1e-2

    def test_against_reference(self, maps):
        assert relative_l2(maps["direct"], maps["reference"]) < 1e-2

    def test_vanishing_fiber(self):
        peaks = [np.abs(jsa_direct(FwmConfig(fiber_length=L), normalize=False)).max()
                 for L in (1e-1, 1e-3, 1e-5)]
        # the bare amplitude is linear in L once the fiber is short
        assert peaks[1] / peaks[2] == pytest.approx(100.0, rel=1e-3)
        assert peaks[0] > peaks[1] > peaks[2]

    def test_quadrature_floor(self):
        with pytest.raises(FwmError):
            FwmQuadrature(8, 1024)


class TestTriangle:
    @pytest.mark.parametrize("name", ["rft", "direct", "reference"])
    def test_swap_symmetry(self, maps, name):
        F = maps[name]
        assert np.abs(F - F.T).max() < 1e-12

    @pytest.mark.parametrize("name", ["rft", "direct", "reference"])
    def test_ridge_at_twice_pump(self, maps, name):
        assert abs(ridge_peak(maps[name], CFG)) <= CFG.map_step

    def test_closure(self, maps):
        n = np.linalg.norm
        r, d, c = maps["rft"], maps["direct"], maps["reference"]
        assert n(r - d) <= n(r - c) + n(c - d)


class TestConfig:
    @pytest.mark.parametrize("kw", [dict(pump_sigma=0.0), dict(fiber_length=-1.0),
                                    dict(T0=-2.0), dict(map_size=1)])
    def test_invalid(self, kw):
        with pytest.raises(FwmError):
            FwmConfig(**kw)

    def test_default_window_is_full_span(self):
        assert CFG.T0 == pytest.approx(CFG.sum_grid.t_total)

    def test_grid_must_hold_pump(self):
        with pytest.raises(FwmError):
            FwmConfig(pump_sigma=5.0).validate()

    def test_axis_is_centred_on_pump(self):
        assert CFG.axis[CFG.map_size // 2] == CFG.pump_center


def test_save_map(tmp_path, maps):
    path, side = save_map(tmp_path / "jsa.tsv", maps["rft"], CFG)
    rows = path.read_text().splitlines()
    assert len(rows) == CFG.map_size
    first = complex(*map(float, rows[3].split("\t")[5].split(",")))
    assert first == maps["rft"][3, 5]
    assert side.name == "jsa_axis.tsv"
    assert side.read_text().splitlines()[0] == "index\tomega"
