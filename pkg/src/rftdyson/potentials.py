"""Perturbation models V(t): time samplers and spectra.

Spectra follow the unitary transform of :mod:`rftdyson.spectral`, so for every
kind ``spectrum(m) ~ forward_ft(sample_time(m))``.  Kinds whose spectrum is a
set of delta spikes also expose them through :meth:`PotentialModel.spikes` so
that downstream convolutions can shift exactly instead of going through bins.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .spectral import (SQRT_2PI, DeltaSpike, DualGrid, SpectralSignal,
                       forward_ft, time_signal)

KINDS = ("gaussian_kick", "harmonic_drive", "ramped_oscillator", "constant_bias",
         "tabulated")

# keeps max|V| <= 0.1 for every kind (harmonic_drive peaks at 2*strength)
DEFAULT_STRENGTH = 0.05


class PotentialError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PotentialModel:
    kind: str
    strength: float = DEFAULT_STRENGTH
    tau: float | None = None
    center: float = 0.0
    omega_d: float | None = None
    eps: float | None = None
    ramp: str | None = None
    resonant_only: bool = False
    samples: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PotentialError(f"unknown potential kind {self.kind!r}")
        if self.kind == "gaussian_kick" and not (self.tau and self.tau > 0):
            raise PotentialError("gaussian_kick needs tau > 0")
        if self.kind in ("harmonic_drive", "ramped_oscillator") and self.omega_d is None:
            raise PotentialError(f"{self.kind} needs omega_d")
        if self.kind == "ramped_oscillator":
            if not (self.eps and self.eps > 0):
                raise PotentialError("ramped_oscillator needs eps > 0")
            if self.ramp not in ("one_sided", "two_sided"):
                raise PotentialError("ramped_oscillator must pick ramp="
                                     "'one_sided' or 'two_sided'")
        if self.kind == "tabulated":
            if self.samples is None:
                raise PotentialError("tabulated potential needs samples")
            s = np.array(self.samples, dtype=complex)
            s.setflags(write=False)
            object.__setattr__(self, "samples", s)

    # -- constructors -------------------------------------------------------

    @classmethod
    def gaussian_kick(cls, tau, strength=DEFAULT_STRENGTH, center=0.0):
        return cls("gaussian_kick", strength, tau=tau, center=center)

    @classmethod
    def harmonic_drive(cls, omega_d, strength=DEFAULT_STRENGTH, resonant_only=False):
        return cls("harmonic_drive", strength, omega_d=omega_d,
                   resonant_only=resonant_only)

    @classmethod
    def ramped_oscillator(cls, omega_d, eps, ramp, strength=DEFAULT_STRENGTH):
        return cls("ramped_oscillator", strength, omega_d=omega_d, eps=eps, ramp=ramp)

    @classmethod
    def constant_bias(cls, strength=DEFAULT_STRENGTH):
        return cls("constant_bias", strength)

    @classmethod
    def tabulated(cls, samples, strength=1.0):
        return cls("tabulated", strength, samples=samples)

    def with_strength(self, strength: float) -> "PotentialModel":
        kw = {k: getattr(self, k) for k in
              ("kind", "tau", "center", "omega_d", "eps", "ramp", "resonant_only",
               "samples")}
        return PotentialModel(strength=strength, **kw)

    # -- time domain --------------------------------------------------------

    def evaluate(self, t) -> np.ndarray:
        """V(t) at arbitrary times (tabulated data is band-limited interpolated)."""
        t = np.asarray(t, dtype=float)
        s = self.strength
        if self.kind == "gaussian_kick":
            v = np.exp(-((t - self.center) ** 2) / (2 * self.tau ** 2))
        elif self.kind == "harmonic_drive":
            if self.resonant_only:
                v = np.exp(-1j * self.omega_d * t)
            else:
                v = 2 * np.cos(self.omega_d * t)
        elif self.kind == "ramped_oscillator":
            if self.ramp == "two_sided":
                env = np.exp(-self.eps * np.abs(t))
            else:
                env = np.exp(self.eps * np.minimum(t, 0.0))
            v = env * np.exp(-1j * self.omega_d * t)
        elif self.kind == "constant_bias":
            v = np.ones_like(t)
        else:
            raise PotentialError("tabulated potentials need evaluate_on(grid, t)")
        return s * np.asarray(v, dtype=complex)

    def evaluate_on(self, grid: DualGrid, t) -> np.ndarray:
        if self.kind != "tabulated":
            return self.evaluate(t)
        self._check_tab(grid)
        t = np.asarray(t, dtype=float)
        # V(t) = sum_j c_j exp(-i w_j t), c_j = (1/N) sum_n V_n exp(i w_j t_n)
        phase_n = np.exp(1j * np.multiply.outer(grid.omegas, grid.times))
        coeff = phase_n @ self.samples / grid.n_samples
        return self.strength * (np.exp(-1j * np.multiply.outer(t, grid.omegas)) @ coeff)

    def sample_time(self, grid: DualGrid) -> SpectralSignal:
        if self.kind == "tabulated":
            self._check_tab(grid)
            return time_signal(grid, self.strength * self.samples)
        return time_signal(grid, self.evaluate(grid.times))

    def _check_tab(self, grid: DualGrid) -> None:
        if self.samples.shape != (grid.n_samples,):
            raise PotentialError(
                f"tabulated potential has {self.samples.size} samples, "
                f"grid has {grid.n_samples}")

    # -- frequency domain ---------------------------------------------------

    def spikes(self, grid: DualGrid | None = None) -> list[DeltaSpike] | None:
        """Delta content of the spectrum, or ``None`` for continuous spectra."""
        s = self.strength * SQRT_2PI
        if self.kind == "constant_bias":
            out = [DeltaSpike(0.0, s)]
        elif self.kind == "harmonic_drive":
            out = [DeltaSpike(self.omega_d, s)]
            if not self.resonant_only:
                out.append(DeltaSpike(-self.omega_d, s))
        else:
            return None
        if grid is not None:
            for sp in out:
                if not grid.is_aligned(sp.center):
                    raise PotentialError(
                        f"spike at {sp.center} is not aligned with dw={grid.dw}")
        return out

    def spectrum(self, grid: DualGrid) -> SpectralSignal:
        w = grid.omegas
        sp = self.spikes(grid)
        if sp is not None:
            vals = np.zeros(grid.n_samples, dtype=complex)
            for spike in sp:
                vals += spike.render(grid).values
            return SpectralSignal(grid, vals, "frequency")
        if self.kind == "gaussian_kick":
            vals = (self.strength * self.tau * np.exp(-(w * self.tau) ** 2 / 2)
                    * np.exp(1j * w * self.center))
        elif self.kind == "ramped_oscillator":
            vals = self.strength * lorentzian(w, self.omega_d, self.eps) / SQRT_2PI
        else:
            return forward_ft(self.sample_time(grid))
        return SpectralSignal(grid, vals, "frequency")

    def describe(self) -> dict:
        d = {"kind": self.kind, "strength": self.strength}
        for k in ("tau", "center", "omega_d", "eps", "ramp"):
            v = getattr(self, k)
            if v is not None and not (k == "center" and self.kind != "gaussian_kick"):
                d[k] = v
        if self.kind == "harmonic_drive":
            d["resonant_only"] = self.resonant_only
        return d


def lorentzian(omega, omega_d: float, eps: float):
    """``2 eps / ((w - w_d)^2 + eps^2)``: the transform of exp(-eps|t|) exp(-i w_d t)
    taken as a plain integral (peak value 2/eps)."""
    omega = np.asarray(omega, dtype=float)
    return 2 * eps / ((omega - omega_d) ** 2 + eps ** 2)


def load_tabulated(path, grid: DualGrid, strength: float = 1.0,
                   atol: float = 1e-9) -> PotentialModel:
    """Read ``t <ws> re,im`` rows and check them against the grid's time axis."""
    ts, vals = [], []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise PotentialError(f"{path}:{lineno}: expected 2 columns")
        try:
            re_, im_ = parts[1].split(",")
            ts.append(float(parts[0]))
            vals.append(complex(float(re_), float(im_)))
        except ValueError as exc:
            raise PotentialError(f"{path}:{lineno}: {exc}") from None
    ts = np.asarray(ts)
    if ts.size != grid.n_samples:
        raise PotentialError(
            f"{path}: {ts.size} samples but grid has {grid.n_samples}")
    if not np.allclose(ts, grid.times, rtol=0, atol=atol * max(1.0, grid.dt)):
        raise PotentialError(f"{path}: time column does not match the grid")
    return PotentialModel.tabulated(np.asarray(vals), strength=strength)


def save_tabulated(path, grid: DualGrid, values) -> None:
    values = np.asarray(values, dtype=complex)
    lines = ["# t\tre,im"]
    lines += [f"{t:.17g}\t{v.real:.17g},{v.imag:.17g}"
              for t, v in zip(grid.times, values)]
    Path(path).write_text("\n".join(lines) + "\n")
