"""Joint spectral amplitude of a four-wave-mixing photon pair.

Three routes to the same map ``F(w_s, w_idl)``:

* :func:`jsa_reference`: closed form under the fiber approximation,
  ``exp(i x L/2) sinc(x L/2) exp(-nu^2 / 4 sigma^2)`` with
  ``x = dk + 2 gamma P`` and ``nu = w_s + w_idl - 2 W0``.
* :func:`jsa_rft`: convolution chain over the sum frequency,
  ``F = (1/2 pi) (W_T0 * [G(.) S(x - k'' (.)^2 / 4)])(nu)``, where ``W_T0`` is
  the interaction-window spectrum, ``G`` the pump envelope and ``S`` the
  phase-matching sinc shifted by pump dispersion.
* :func:`jsa_direct`: brute-force z, t quadrature with the squared Gaussian
  pump evaluated in closed form per z.

All three are normalized so the fiber-approximation peak is 1.  The
interaction window is centred on the pump pulse, ``t in [-T0/2, T0/2]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .spectral import DualGrid, convolve_kernel, window_spectrum


class FwmError(ValueError):
    pass


@dataclass(frozen=True)
class FwmConfig:
    pump_center: float = 10.0
    pump_sigma: float = 1.0
    gvd: float = 0.0
    gamma_p: float = 0.0
    fiber_length: float = 1.0
    # None uses the full time span of the sum-frequency grid
    T0: float | None = None
    map_size: int = 64
    map_step: float = 0.125
    # number of sum-frequency bins used for the window convolution
    sum_samples: int = 512

    def __post_init__(self):
        if not self.pump_sigma > 0:
            raise FwmError("pump_sigma must be positive")
        if not self.fiber_length > 0:
            raise FwmError("fiber_length must be positive")
        if self.T0 is None:
            object.__setattr__(self, "T0", self.sum_grid.t_total)
        if not self.T0 > 0:
            raise FwmError("T0 must be positive")
        if self.map_size < 2 or not self.map_step > 0:
            raise FwmError("map needs at least two points and a positive step")

    @property
    def fiber_approx(self) -> bool:
        return abs(self.gvd) < 1.0 / (self.pump_sigma ** 2 * self.fiber_length)

    @property
    def axis(self) -> np.ndarray:
        """Shared signal and idler axis, centred on the pump."""
        n = self.map_size
        return self.pump_center + (np.arange(n) - n // 2) * self.map_step

    @property
    def sum_grid(self) -> DualGrid:
        return DualGrid.from_dw(self.sum_samples, self.map_step)

    def validate(self) -> "FwmConfig":
        g = self.sum_grid
        p = g.t_total / self.T0
        if abs(p - np.rint(p)) > 1e-9 * p:
            raise FwmError(f"T0={self.T0} must divide the sum-frequency time span "
                           f"{g.t_total}")
        if 2 * (self.map_size // 2) > g.n_samples // 2:
            raise FwmError("sum-frequency grid too small for the map")
        if 8 * self.pump_sigma > g.w_max:
            raise FwmError("sum-frequency grid does not hold the pump envelope")
        return self


def wave_mismatch(w_s, w_idl, cfg: FwmConfig):
    """``(k''/4) (w_s - w_idl)^2``."""
    d = np.subtract(w_s, w_idl)
    return cfg.gvd / 4.0 * d * d


def _phase_sinc(x, L: float):
    """``(1/L) int_0^L exp(i x z) dz``."""
    return window_spectrum(x, L) / L


def _map_coords(cfg: FwmConfig):
    """Sum and difference lattices; both are symmetric under the swap."""
    j = np.arange(cfg.map_size)
    js, ji = np.meshgrid(j, j, indexing="ij")
    # nu = w_s + w_idl - 2 W0 in units of the map step
    nsum = js + ji - 2 * (cfg.map_size // 2)
    ndiff = np.abs(js - ji)
    return nsum, ndiff


def jsa_reference(cfg: FwmConfig) -> np.ndarray:
    if not cfg.fiber_approx:
        raise FwmError("closed form needs the fiber approximation "
                       "|k''| < 1/(sigma^2 L)")
    nsum, ndiff = _map_coords(cfg)
    nu = nsum * cfg.map_step
    x = wave_mismatch(ndiff * cfg.map_step, 0.0, cfg) + 2 * cfg.gamma_p
    return _phase_sinc(x, cfg.fiber_length) * np.exp(-nu ** 2 / (4 * cfg.pump_sigma ** 2))


def jsa_rft(cfg: FwmConfig, pump_dispersion: bool = True) -> np.ndarray:
    """Convolution-chain JSA; ``pump_dispersion=False`` drops the k'' shift."""
    cfg.validate()
    g = cfg.sum_grid
    w = g.omegas
    envelope = np.exp(-w ** 2 / (4 * cfg.pump_sigma ** 2))
    shift = cfg.gvd * w ** 2 / 4 if pump_dispersion else 0.0
    nsum, ndiff = _map_coords(cfg)
    out = np.empty(nsum.shape, dtype=complex)
    centre = g.n_samples // 2
    kernel = lambda x: window_spectrum(x, cfg.T0, -cfg.T0 / 2)  # noqa: E731
    for d in range(cfg.map_size):
        x = wave_mismatch(d * cfg.map_step, 0.0, cfg) + 2 * cfg.gamma_p
        line = convolve_kernel(envelope * _phase_sinc(x - shift, cfg.fiber_length),
                               g, kernel) / (2 * np.pi)
        sel = ndiff == d
        out[sel] = line[centre + nsum[sel]]
    return out


@dataclass(frozen=True)
class FwmQuadrature:
    steps_z: int = 256
    steps_t: int = 1024

    def __post_init__(self):
        if min(self.steps_z, self.steps_t) < 16:
            raise FwmError("quadrature needs at least 16 steps per axis")


def _trapezoid(a: float, b: float, steps: int):
    x = np.linspace(a, b, steps + 1)
    w = np.full(steps + 1, (b - a) / steps)
    w[0] = w[-1] = 0.5 * (b - a) / steps
    return x, w


def jsa_direct(cfg: FwmConfig, quad: FwmQuadrature = FwmQuadrature(),
               normalize: bool = True) -> np.ndarray:
    """Double quadrature of the z, t interaction integral.

    ``normalize=False`` returns the bare integral, which scales with the
    fiber length instead of peaking at 1.
    """
    s2 = cfg.pump_sigma ** 2
    L = cfg.fiber_length
    z, wz = _trapezoid(-L, 0.0, quad.steps_z)
    t, wt = _trapezoid(-cfg.T0 / 2, cfg.T0 / 2, quad.steps_t)
    # squared pump field: per pump exp(-W^2 (1 - i k'' s2 z) / (2 s2) - i W t)
    a = 1.0 - 1j * cfg.gvd * s2 * z
    pump2 = (2 * np.pi * s2 / a)[None, :] * np.exp(-s2 * np.outer(t * t, 1.0 / a))
    nsum, ndiff = _map_coords(cfg)
    nu = np.arange(nsum.min(), nsum.max() + 1) * cfg.map_step
    inner = np.exp(1j * np.outer(nu, t)) @ (wt[:, None] * pump2)  # (nu, z)
    dvals = np.arange(cfg.map_size) * cfg.map_step
    x = wave_mismatch(dvals, 0.0, cfg) + 2 * cfg.gamma_p
    outer = np.exp(-1j * np.outer(x, z)) * wz[None, :]  # (diff, z)
    table = outer @ inner.T  # (diff, nu)
    norm = 2 * np.pi ** 1.5 * cfg.pump_sigma * L if normalize else 1.0
    return table[ndiff, nsum - nsum.min()] / norm


def ridge_peak(F: np.ndarray, cfg: FwmConfig) -> float:
    """Sum-frequency offset ``nu`` of the anti-diagonal holding the largest |F|."""
    nsum, _ = _map_coords(cfg)
    keys = np.unique(nsum)
    prof = np.array([np.abs(F[nsum == k]).max() for k in keys])
    return float(keys[np.argmax(prof)] * cfg.map_step)


def save_map(path, F: np.ndarray, cfg: FwmConfig) -> tuple[Path, Path]:
    """Matrix text file (row = signal index) plus an axis sidecar."""
    path = Path(path)
    rows = ["\t".join(f"{v.real:.17g},{v.imag:.17g}" for v in row) for row in F]
    path.write_text("\n".join(rows) + "\n")
    side = path.with_name(path.stem + "_axis.tsv")
    side.write_text("index\tomega\n" + "".join(
        f"{i}\t{w:.17g}\n" for i, w in enumerate(cfg.axis)))
    return path, side
