"""First-order transition amplitude as a windowed-sinc convolution.

The amplitude for finding the system in ``w_f`` after a measurement window
``[r, r + T]`` is

    c1(w) = V_fi A / (i hbar sqrt(2 pi)) * (W_T,r * V~ * delta(. - w_i))(w)

with ``W_T,r`` the window spectrum and ``V~`` the unitary spectrum of the
potential.  The whole distribution over the grid is returned; callers sample
it at the final frequencies they care about.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .potentials import PotentialModel
from .spectral import (SQRT_2PI, DualGrid, SpectralSignal, convolve_kernel,
                       window_spectrum)

HBAR = 1.0


class WindowError(ValueError):
    """A transition spec that is inconsistent with the grid."""


@dataclass(frozen=True)
class TransitionSpec:
    omega0: float
    T: float
    i_index: int = 0
    r: float = 0.0
    k_max: int = 1
    v_fi: complex = 1.0
    v_fk_ki: complex = 1.0
    A: complex = 1.0
    # constant lift of the initial frequency, e.g. a junction bias
    omega_i_shift: float = 0.0
    cyclotron: bool = False
    # "angular": w_fund = 2 pi / T; "inverse_time": w_fund = 1 / T
    fund_convention: str = "angular"
    hbar: float = HBAR

    @property
    def omega_i(self) -> float:
        return self.i_index * self.omega0 + self.omega_i_shift

    def omega_k(self, k: int) -> float:
        return k * self.omega0

    @property
    def omega_fund(self) -> float:
        if self.fund_convention == "angular":
            return 2 * np.pi / self.T
        if self.fund_convention == "inverse_time":
            return 1.0 / self.T
        raise WindowError(f"unknown fundamental-frequency convention "
                          f"{self.fund_convention!r}")

    def pad_factor(self, grid: DualGrid) -> int:
        p = grid.t_total / self.T
        if self.T <= 0 or abs(p - np.rint(p)) > 1e-9 * p:
            raise WindowError(
                f"padding invariant violated: T={self.T} must be t_total/p for an "
                f"integer p (t_total={grid.t_total})")
        return int(np.rint(p))

    def window_steps(self, grid: DualGrid) -> int:
        return grid.n_samples // self.pad_factor(grid)

    def validate(self, grid: DualGrid) -> "TransitionSpec":
        if self.hbar != HBAR:
            raise WindowError("hbar is fixed to 1 (natural units)")
        m = self.omega0 / grid.dw
        if self.omega0 <= 0 or abs(m - np.rint(m)) > 1e-9 * max(1.0, m):
            raise WindowError(f"omega0={self.omega0} is not a positive multiple of "
                              f"dw={grid.dw}")
        self.pad_factor(grid)
        try:
            grid.steps_of(abs(self.r))
        except ValueError:
            raise WindowError(f"window offset r={self.r} is not a multiple of dt") \
                from None
        if not grid.is_aligned(self.omega_i_shift):
            raise WindowError(f"initial shift {self.omega_i_shift} is not aligned "
                              f"with dw={grid.dw}")
        if self.k_max < 0:
            raise WindowError("k_max must be non-negative")
        if self.cyclotron and not np.isclose(self.omega_fund, self.omega0,
                                             rtol=1e-9):
            raise WindowError(
                f"cyclotron configuration needs omega_fund == omega0 "
                f"({self.omega_fund} != {self.omega0})")
        return self


def cyclotron_spec(grid: DualGrid, p: int, **kw) -> TransitionSpec:
    """Spec whose level spacing equals the window's fundamental 2 pi / T."""
    T = grid.t_total / p
    return TransitionSpec(omega0=2 * np.pi / T, T=T, cyclotron=True, **kw)


def _prefactor(spec: TransitionSpec) -> complex:
    return spec.v_fi * spec.A / (1j * spec.hbar * SQRT_2PI)


def window_convolved(model: PotentialModel, grid: DualGrid, T: float, r: float,
                     offset: float) -> np.ndarray:
    """``(W_T,r * V~)(w - offset)`` on the grid.

    Delta spectra are shifted analytically; continuous spectra are convolved
    against the analytic window kernel so no window tail is cropped.
    """
    w = grid.omegas
    spikes = model.spikes(grid)
    if spikes is not None:
        out = np.zeros(grid.n_samples, dtype=complex)
        for s in spikes:
            out += s.weight * window_spectrum(w - offset - s.center, T, r)
        return out
    vt = model.spectrum(grid).values
    return convolve_kernel(vt, grid, lambda x: window_spectrum(x - offset, T, r))


def first_order_amplitude(spec: TransitionSpec, model: PotentialModel,
                          grid: DualGrid) -> SpectralSignal:
    spec.validate(grid)
    vals = window_convolved(model, grid, spec.T, spec.r, spec.omega_i)
    return SpectralSignal(grid, _prefactor(spec) * vals, "frequency",
                          label="first_order")


def gaussian_kick_asymptotic(spec: TransitionSpec, tau: float, grid: DualGrid,
                             Omega: float = 1.0) -> SpectralSignal:
    """Infinite-window envelope ``tau/sqrt(Omega) exp(-(w - w_i)^2 tau^2 / 2)``.

    Shape only: multiply by ``sqrt(2 pi) * strength * V_fi A / (i hbar)`` to
    compare against :func:`first_order_amplitude` for a centred kick.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    w = grid.omegas - spec.omega_i
    return SpectralSignal(grid, tau / np.sqrt(Omega) * np.exp(-(w * tau) ** 2 / 2),
                          "frequency", label="gaussian_asymptotic")


def asymptotic_scale(spec: TransitionSpec, strength: float) -> complex:
    return SQRT_2PI * strength * spec.v_fi * spec.A / (1j * spec.hbar)


def bardeen_first_order(spec: TransitionSpec, eV0: float, grid: DualGrid,
                        strength: float = 1.0) -> SpectralSignal:
    """Constant bias with the initial level lifted by the junction bias ``eV0``."""
    if not grid.is_aligned(eV0):
        raise WindowError(f"bias eV0={eV0} is not aligned with dw={grid.dw}")
    spec = biased(spec, eV0).validate(grid)
    vals = window_convolved(PotentialModel.constant_bias(strength), grid, spec.T,
                            spec.r, spec.omega_i)
    return SpectralSignal(grid, _prefactor(spec) * vals, "frequency",
                          label="bardeen_first_order")


def biased(spec: TransitionSpec, eV0: float) -> TransitionSpec:
    """Spec whose initial frequency is lifted by the bias energy (hbar = 1)."""
    return replace(spec, omega_i_shift=spec.omega_i_shift + eV0)
