"""Dual time/frequency grids, the transform convention and spectral convolution.

Conventions (natural units, hbar = 1):

    F(w) = 1/sqrt(2 pi) * int f(t) exp(+i w t) dt
    f(t) = 1/sqrt(2 pi) * int F(w) exp(-i w t) dw

Both axes are centred on zero: ``t_n = (n - N/2) dt`` and ``w_n = (n - N/2) dw``
with ``dw * dt = 2 pi / N``.  A delta distribution ``delta(w - a)`` is a single
bin of height ``1/dw`` so that convolution with it is an exact shift.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

Domain = Literal["time", "frequency"]

SQRT_2PI = np.sqrt(2.0 * np.pi)


class GridMismatchError(ValueError):
    pass


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class DualGrid:
    """Paired uniform time and angular-frequency lattices."""

    n_samples: int
    dt: float

    def __post_init__(self):
        n = self.n_samples
        if n < 8 or n & (n - 1):
            raise ValueError(f"n_samples must be a power of two >= 8, got {n}")
        if not self.dt > 0:
            raise ValueError("dt must be positive")

    @classmethod
    def from_dw(cls, n_samples: int, dw: float) -> "DualGrid":
        return cls(n_samples, 2.0 * np.pi / (n_samples * dw))

    @property
    def dw(self) -> float:
        return 2.0 * np.pi / (self.n_samples * self.dt)

    @property
    def t_total(self) -> float:
        return self.n_samples * self.dt

    @property
    def w_min(self) -> float:
        return -(self.n_samples // 2) * self.dw

    @property
    def w_max(self) -> float:
        return (self.n_samples // 2 - 1) * self.dw

    @property
    def times(self) -> np.ndarray:
        return (np.arange(self.n_samples) - self.n_samples // 2) * self.dt

    @property
    def omegas(self) -> np.ndarray:
        return (np.arange(self.n_samples) - self.n_samples // 2) * self.dw

    def index_of(self, omega: float) -> int:
        """Index of the frequency bin nearest ``omega`` (may fall off the grid)."""
        return int(np.rint(omega / self.dw)) + self.n_samples // 2

    def is_aligned(self, omega: float, rtol: float = 1e-9) -> bool:
        m = omega / self.dw
        return abs(m - np.rint(m)) <= rtol * max(1.0, abs(m))

    def steps_of(self, duration: float, rtol: float = 1e-9) -> int:
        """Number of time steps in ``duration``; raises if not a whole number."""
        m = duration / self.dt
        if abs(m - np.rint(m)) > rtol * max(1.0, abs(m)):
            raise ValueError(f"duration {duration} is not a multiple of dt={self.dt}")
        return int(np.rint(m))

    def params(self) -> dict:
        return {"n_samples": self.n_samples, "dt": self.dt, "dw": self.dw,
                "t_total": self.t_total}


@dataclass(frozen=True, eq=False)
class SpectralSignal:
    grid: DualGrid
    values: np.ndarray
    domain: Domain = "frequency"
    label: str = field(default="", compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n_samples,):
            raise ValueError(
                f"expected {self.grid.n_samples} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise FloatingPointError("non-finite samples in signal")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.domain not in ("time", "frequency"):
            raise DomainError(f"unknown domain {self.domain!r}")

    @property
    def axis(self) -> np.ndarray:
        return self.grid.times if self.domain == "time" else self.grid.omegas

    def at(self, omega: float) -> complex:
        """Sample a frequency-domain signal at a grid-aligned frequency."""
        idx = self.grid.index_of(omega)
        if not 0 <= idx < self.grid.n_samples:
            raise IndexError(f"omega={omega} outside the grid")
        return complex(self.values[idx])

    def scaled(self, factor: complex) -> "SpectralSignal":
        return SpectralSignal(self.grid, self.values * factor, self.domain, self.label)

    def __add__(self, other: "SpectralSignal") -> "SpectralSignal":
        _check_same(self, other)
        return SpectralSignal(self.grid, self.values + other.values, self.domain)

    def __sub__(self, other: "SpectralSignal") -> "SpectralSignal":
        _check_same(self, other)
        return SpectralSignal(self.grid, self.values - other.values, self.domain)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


@dataclass(frozen=True)
class DeltaSpike:
    """Weighted ``weight * delta(w - center)`` with a continuum weight."""

    center: float
    weight: complex = 1.0

    def snapped(self, grid: DualGrid) -> "DeltaSpike":
        m = np.rint(self.center / grid.dw)
        if abs(self.center - m * grid.dw) > grid.dw / 2:
            raise ValueError("spike centre is not representable")
        return DeltaSpike(m * grid.dw, self.weight)

    def render(self, grid: DualGrid) -> SpectralSignal:
        if not grid.is_aligned(self.center):
            raise ValueError(f"delta centre {self.center} is not grid aligned")
        return unit_delta(grid, self.center).scaled(self.weight)


def _check_same(a: SpectralSignal, b: SpectralSignal) -> None:
    if a.grid != b.grid:
        raise GridMismatchError("signals live on different grids")
    if a.domain != b.domain:
        raise DomainError("signals live in different domains")


def sinc(x):
    """sin(x)/x with a Taylor branch near the origin."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = np.abs(x) < 1e-4
    xs = x[small]
    out[small] = 1.0 - xs * xs / 6.0 + xs ** 4 / 120.0
    xl = x[~small]
    out[~small] = np.sin(xl) / xl
    return out if out.ndim else float(out)


def window_spectrum(omega, T: float, r: float = 0.0):
    """Closed-form ``int_r^{r+T} exp(i w t) dt`` evaluated at arbitrary ``omega``."""
    omega = np.asarray(omega, dtype=float)
    return T * np.exp(1j * omega * (r + T / 2)) * sinc(omega * T / 2)


def forward_ft(signal: SpectralSignal) -> SpectralSignal:
    if signal.domain != "time":
        raise DomainError("forward_ft expects a time-domain signal")
    g = signal.grid
    # exp(+i w t) on the centred lattice is an inverse DFT of the shifted data
    spec = np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(signal.values)))
    return SpectralSignal(g, spec * (g.n_samples * g.dt / SQRT_2PI), "frequency")


def inverse_ft(signal: SpectralSignal) -> SpectralSignal:
    if signal.domain != "frequency":
        raise DomainError("inverse_ft expects a frequency-domain signal")
    g = signal.grid
    f = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(signal.values)))
    return SpectralSignal(g, f * (g.dw / SQRT_2PI), "time")


def linear_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Full (non-circular) discrete convolution through a zero-padded FFT."""
    n = a.size + b.size - 1
    nfft = 1 << (n - 1).bit_length()
    out = np.fft.ifft(np.fft.fft(a, nfft) * np.fft.fft(b, nfft))[:n]
    return out


def convolve(a: SpectralSignal, b: SpectralSignal) -> SpectralSignal:
    """``(a * b)(w) = sum_w' a(w') b(w - w') dw`` cropped back to the grid."""
    _check_same(a, b)
    if a.domain != "frequency":
        raise DomainError("convolve acts on frequency-domain signals")
    g = a.grid
    n = g.n_samples
    full = linear_convolve(a.values, b.values)
    # index s of the full result sits at frequency (s - n) * dw
    return SpectralSignal(g, full[n // 2: n // 2 + n] * g.dw, "frequency")


def convolve_kernel(values: np.ndarray, grid: DualGrid, kernel) -> np.ndarray:
    """Convolve grid samples with an analytic kernel ``kernel(w)``.

    The kernel is sampled on a doubled lattice covering every difference
    ``w_m - w_j`` so no part of its support is cropped.
    """
    n = grid.n_samples
    diffs = (np.arange(2 * n - 1) - (n - 1)) * grid.dw
    k = kernel(diffs)
    full = linear_convolve(values, k)
    # output index m needs sum_j v_j k(w_m - w_j); (m - j) + n - 1 indexes diffs
    return full[n - 1: 2 * n - 1] * grid.dw


def shift(signal: SpectralSignal, omega: float) -> SpectralSignal:
    """Exact ``signal * delta(w - omega)`` for grid-aligned ``omega``."""
    g = signal.grid
    if not g.is_aligned(omega):
        raise ValueError(f"shift {omega} is not grid aligned")
    m = int(np.rint(omega / g.dw))
    out = np.zeros(g.n_samples, dtype=complex)
    if m >= 0:
        if m < g.n_samples:
            out[m:] = signal.values[: g.n_samples - m]
    elif -m < g.n_samples:
        out[:m] = signal.values[-m:]
    return SpectralSignal(g, out, signal.domain)


def unit_delta(grid: DualGrid, center: float = 0.0) -> SpectralSignal:
    if not grid.is_aligned(center):
        raise ValueError(f"delta centre {center} is not grid aligned")
    idx = grid.index_of(center)
    if not 0 <= idx < grid.n_samples:
        raise IndexError("delta centre lies outside the grid")
    v = np.zeros(grid.n_samples, dtype=complex)
    v[idx] = 1.0 / grid.dw
    return SpectralSignal(grid, v, "frequency")


def windowed_sinc_spectrum(T: float, r: float, grid: DualGrid) -> SpectralSignal:
    """``T exp(i w T/2) sinc(w T/2) exp(i w r)`` on the frequency lattice."""
    if not T > 0:
        raise ValueError("window duration must be positive")
    if T > grid.t_total * (1 + 1e-12):
        raise ValueError("window longer than the signal")
    return SpectralSignal(grid, window_spectrum(grid.omegas, T, r), "frequency")


def time_signal(grid: DualGrid, values) -> SpectralSignal:
    return SpectralSignal(grid, values, "time")


def relative_l2(a, b) -> float:
    a = np.asarray(getattr(a, "values", a))
    b = np.asarray(getattr(b, "values", b))
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))
