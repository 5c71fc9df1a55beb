"""Second-order amplitude through the impulse response and transfer function.

The nested Dyson integral is decoupled in two steps.  For each intermediate
level ``k`` the inner integral, viewed as a function of the inner window width,

    psi_k(D) = int_r^{r+D} exp(i w_ki t) V(t) dt,       0 <= D <= T,

is the *impulse response*.  Tiling it ``p = t_total / T`` times and taking a
plain (non-unitary) Fourier transform gives the *transfer function* ``Psi_k``.
The outer integral then becomes a chain of convolutions,

    c2(w) = A V_fk V_ki / (i hbar)^2 / (2 pi)^(3/2)
            * sum_k (W_T,r * V~ * delta(. - w_k) * Psi_k)(w) / k_max.

With zero potential (``V~`` a delta at the origin) and ``w_ki`` on the window's
harmonic lattice, ``Psi_k`` is exactly two spikes of weight ``+-2 pi/(i w_ki)``
at ``-w_ki`` and ``0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .first_order import TransitionSpec, WindowError, biased
from .potentials import PotentialModel
from .spectral import (SQRT_2PI, DualGrid, SpectralSignal, convolve,
                       convolve_kernel, forward_ft, shift, time_signal, unit_delta,
                       window_spectrum)

K_EQ_I_MODES = ("paper", "literal")
EDGE_MODES = ("left", "average")


@dataclass(frozen=True, eq=False)
class ImpulseResponseTrace:
    k_index: int
    values: np.ndarray
    window: float
    # psi_k(T); the tiled trace jumps from this back to psi_k(0) = 0
    end_value: complex = 0.0

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def dt(self) -> float:
        return self.window / self.values.size

    @property
    def widths(self) -> np.ndarray:
        return np.arange(self.values.size) * self.dt


@dataclass(frozen=True, eq=False)
class TransferFunction:
    k_index: int
    values: SpectralSignal
    pad_factor: int
    padded: np.ndarray | None = field(default=None, repr=False)


def _check_k(spec: TransitionSpec, k_index: int) -> None:
    if abs(k_index) > spec.k_max:
        raise ValueError(f"k={k_index} outside the intermediate range "
                         f"|k| <= {spec.k_max}")


def _impulse_values(a: float, model: PotentialModel, grid: DualGrid, r: float,
                    m: int, vt: np.ndarray | None) -> np.ndarray:
    """psi(n dt) for n = 0..m, where the inner phase is exp(i a t)."""
    widths = np.arange(m + 1) * grid.dt
    spikes = model.spikes(grid)
    if spikes is not None:
        out = np.zeros(m + 1, dtype=complex)
        for s in spikes:
            out += s.weight / SQRT_2PI * window_spectrum(a - s.center, widths, r)
        return out
    # psi(D) = dw/sqrt(2 pi) sum_j V~_j W_D,r(a - w_j); for x_j = a - w_j != 0,
    # W_D,r(x) = exp(i x r) (exp(i x D) - 1) / (i x) and the exp(-i w_j D)
    # factor over D = n dt is a DFT of length N.
    n = grid.n_samples
    x = a - grid.omegas
    zero = np.abs(x) < grid.dw / 2
    g = np.zeros(n, dtype=complex)
    nz = ~zero
    g[nz] = vt[nz] * np.exp(1j * x[nz] * r) / (1j * x[nz])
    idx = np.arange(m + 1)
    sign = np.where(idx % 2, -1.0, 1.0)
    dft = np.fft.fft(g)[idx % n] * sign
    out = np.exp(1j * a * widths) * dft - g.sum()
    out += vt[zero].sum() * widths
    return out * grid.dw / SQRT_2PI


def impulse_response(spec: TransitionSpec, model: PotentialModel, grid: DualGrid,
                     k_index: int, _vt: np.ndarray | None = None
                     ) -> ImpulseResponseTrace:
    """Inner integral sampled at every width D = n dt in [0, T)."""
    spec.validate(grid)
    _check_k(spec, k_index)
    m = spec.window_steps(grid)
    if _vt is None and model.spikes(grid) is None:
        _vt = model.spectrum(grid).values
    a = spec.omega_k(k_index) - spec.omega_i
    vals = _impulse_values(a, model, grid, spec.r, m, _vt)
    return ImpulseResponseTrace(k_index, vals[:m], spec.T, end_value=vals[m])


def transfer_function(trace: ImpulseResponseTrace, spec: TransitionSpec,
                      grid: DualGrid, k_eq_i_mode: str = "paper",
                      edge: str = "average") -> TransferFunction:
    """Tile ``trace`` over the signal span and transform it.

    ``edge="average"`` replaces the D = 0 sample by the mean of the two sides
    of the tile-boundary jump, which is the usual treatment of a discontinuity
    in a sampled Fourier series.
    """
    if k_eq_i_mode not in K_EQ_I_MODES:
        raise ValueError(f"k_eq_i_mode must be one of {K_EQ_I_MODES}")
    if edge not in EDGE_MODES:
        raise ValueError(f"edge must be one of {EDGE_MODES}")
    p = spec.pad_factor(grid)
    if trace.values.size * p != grid.n_samples:
        raise WindowError("trace length does not match the window")
    if trace.k_index == spec.i_index and spec.omega_i_shift == 0 \
            and k_eq_i_mode == "paper":
        return TransferFunction(trace.k_index,
                                unit_delta(grid, 0.0).scaled(2 * np.pi), p)
    cell = trace.values.copy()
    if edge == "average":
        cell[0] = 0.5 * (cell[0] + trace.end_value)
    padded = np.tile(cell, p)
    # padded[n] belongs to t = n dt; the grid starts at -t_total/2
    placed = np.roll(padded, grid.n_samples // 2)
    spec_vals = SQRT_2PI * forward_ft(time_signal(grid, placed)).values
    spec_vals = spec_vals * np.exp(1j * grid.omegas * spec.r)
    return TransferFunction(trace.k_index, SpectralSignal(grid, spec_vals, "frequency",
                                                          label=f"Psi_{trace.k_index}"),
                            p, padded)


def _pathway(model: PotentialModel, grid: DualGrid, psi: SpectralSignal,
             omega_k: float, vt: np.ndarray | None) -> np.ndarray:
    """``(V~ * delta(. - w_k) * Psi_k)`` on the grid."""
    shifted = shift(psi, omega_k)
    spikes = model.spikes(grid)
    if spikes is not None:
        out = np.zeros(grid.n_samples, dtype=complex)
        for s in spikes:
            out += s.weight * shift(shifted, s.center).values
        return out
    return convolve(SpectralSignal(grid, vt, "frequency"), shifted).values


@dataclass
class SecondOrderParts:
    """Per-k ingredients kept for inspection and dumps."""

    traces: dict = field(default_factory=dict)
    transfers: dict = field(default_factory=dict)
    skipped: list = field(default_factory=list)


def second_order_amplitude(spec: TransitionSpec, model: PotentialModel,
                           grid: DualGrid, k_eq_i_mode: str = "paper",
                           edge: str = "average", normalize: bool = True,
                           parts: SecondOrderParts | None = None) -> SpectralSignal:
    spec.validate(grid)
    if spec.k_max < 1:
        raise ValueError("second order needs k_max >= 1")
    vt = None if model.spikes(grid) is not None else model.spectrum(grid).values
    acc = np.zeros(grid.n_samples, dtype=complex)
    # fixed summation order keeps results bit-identical
    for k in range(-spec.k_max, spec.k_max + 1):
        trace = impulse_response(spec, model, grid, k, _vt=vt)
        tf = transfer_function(trace, spec, grid, k_eq_i_mode, edge)
        acc += _pathway(model, grid, tf.values, spec.omega_k(k), vt)
        if parts is not None:
            parts.traces[k] = trace
            parts.transfers[k] = tf
    vals = convolve_kernel(acc, grid, lambda x: window_spectrum(x, spec.T, spec.r))
    pref = spec.A * spec.v_fk_ki / (1j * spec.hbar) ** 2 / (2 * np.pi) ** 1.5
    if normalize:
        pref = pref / spec.k_max
    return SpectralSignal(grid, pref * vals, "frequency", label="second_order")


def shifted_impulse_sum(spec: TransitionSpec, grid: DualGrid, ks=None,
                        k_eq_i_mode: str = "paper") -> SpectralSignal:
    """``sum_k delta(. - w_k) * Psi_k`` for zero potential (unit constant V)."""
    model = PotentialModel.constant_bias(1.0)
    ks = range(-spec.k_max, spec.k_max + 1) if ks is None else ks
    acc = np.zeros(grid.n_samples, dtype=complex)
    for k in ks:
        tf = transfer_function(impulse_response(spec, model, grid, k), spec, grid,
                               k_eq_i_mode)
        acc += shift(tf.values, spec.omega_k(k)).values
    return SpectralSignal(grid, acc, "frequency", label="shifted_impulses")


# -- analytic benchmarks --------------------------------------------------------

def _two_series(spec: TransitionSpec, grid: DualGrid, anchor: float, detune: float,
                skip: bool, diagnostics: dict | None, what: str) -> np.ndarray:
    """sum_k (1/(i b_k)) [W_r(w - anchor) - exp(i b_k r) W_r(w - w_k - detune)]

    with ``b_k = w_k - w_i - detune``; this is the exact nested integral for a
    pair of pure tones.
    """
    w = grid.omegas
    acc = np.zeros(grid.n_samples, dtype=complex)
    skipped = []
    head = window_spectrum(w - anchor, spec.T, spec.r)
    for k in range(-spec.k_max, spec.k_max + 1):
        b = spec.omega_k(k) - spec.omega_i - detune
        if abs(b) < grid.dw / 2:
            if not skip:
                raise ZeroDivisionError(f"{what}: resonant pole at k={k}")
            skipped.append(k)
            continue
        tail = window_spectrum(w - spec.omega_k(k) - detune, spec.T, spec.r)
        acc += (head - np.exp(1j * b * spec.r) * tail) / (1j * b)
    if diagnostics is not None:
        diagnostics["skipped_k"] = skipped
    return acc


def second_order_golden_rule(spec: TransitionSpec, omega_d: float, grid: DualGrid,
                             strength: float = 1.0, skip_resonant: bool = True,
                             normalize: bool = True,
                             diagnostics: dict | None = None) -> SpectralSignal:
    """Closed form for V(t) = strength * exp(-i w_d t) at both vertices."""
    spec.validate(grid)
    if not grid.is_aligned(omega_d):
        raise WindowError(f"omega_d={omega_d} is not aligned with dw={grid.dw}")
    acc = _two_series(spec, grid, spec.omega_i + 2 * omega_d, omega_d,
                      skip_resonant, diagnostics, "golden rule")
    pref = spec.A * spec.v_fk_ki * strength ** 2 / (1j * spec.hbar) ** 2
    if normalize:
        pref = pref / spec.k_max
    return SpectralSignal(grid, pref * acc, "frequency", label="golden_rule_2")


def bardeen_second_order(spec: TransitionSpec, eV0: float, grid: DualGrid,
                         strength: float = 1.0, skip_pole: bool = False,
                         normalize: bool = True,
                         diagnostics: dict | None = None) -> SpectralSignal:
    """Constant coupling with the initial level lifted by ``eV0``.

    One window-sinc series sits at the biased initial frequency and one
    opposite-sign copy at each ``w_k``, weighted by ``1/(w_k - w_i - eV0)``.
    """
    if not grid.is_aligned(eV0):
        raise WindowError(f"bias eV0={eV0} is not aligned with dw={grid.dw}")
    spec = biased(spec, eV0).validate(grid)
    acc = _two_series(spec, grid, spec.omega_i, 0.0, skip_pole, diagnostics,
                      "bardeen")
    pref = spec.A * spec.v_fk_ki * strength ** 2 / (1j * spec.hbar) ** 2
    if normalize:
        pref = pref / spec.k_max
    return SpectralSignal(grid, pref * acc, "frequency", label="bardeen_2")
