"""Brute-force Riemann quadrature of the first two Dyson terms.

This is the ground truth every convolution result is checked against.  It
uses nothing from the spectral module beyond complex arithmetic: the phases
``exp(i w t)`` are summed node by node, and the second-order triangle
``r <= t2 <= t1 <= r + T`` gets a fresh inner lattice for every outer node.
Cost is O(steps_outer * steps_inner * levels + steps_outer * n_samples).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .first_order import TransitionSpec
from .potentials import PotentialModel
from .spectral import DualGrid, SpectralSignal

RULES = ("midpoint", "trapezoid")
_BLOCK = 128


@dataclass(frozen=True)
class QuadratureConfig:
    steps_outer: int = 1024
    steps_inner: int = 1024
    rule: str = "trapezoid"

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"rule must be one of {RULES}")
        if min(self.steps_outer, self.steps_inner) < 64:
            raise ValueError("quadrature needs at least 64 steps")


def _nodes(a: float, b, steps: int, rule: str):
    """Nodes and weights on [a, b]; ``b`` may be an array of upper limits."""
    b = np.asarray(b, dtype=float)
    h = (b - a) / steps
    if rule == "trapezoid":
        j = np.arange(steps + 1)
        w = np.ones(steps + 1)
        w[0] = w[-1] = 0.5
    else:
        j = np.arange(steps) + 0.5
        w = np.ones(steps)
    t = a + np.multiply.outer(h, j)
    return t, np.multiply.outer(h, w)


def _potential(model: PotentialModel, grid: DualGrid):
    return lambda t: model.evaluate_on(grid, t)


def direct_first_order(spec: TransitionSpec, model: PotentialModel, grid: DualGrid,
                       quad: QuadratureConfig = QuadratureConfig()) -> SpectralSignal:
    """``(1/i hbar) int_r^{r+T} V(t) exp(i (w_f - w_i) t) dt`` for every grid w_f."""
    t, w = _nodes(spec.r, spec.r + spec.T, quad.steps_outer, quad.rule)
    f = w * _potential(model, grid)(t)
    nu = grid.omegas - spec.omega_i
    vals = np.exp(1j * np.multiply.outer(nu, t)) @ f
    return SpectralSignal(grid, vals * spec.v_fi * spec.A / (1j * spec.hbar),
                          "frequency", label="oracle_first")


def _inner_integrals(spec: TransitionSpec, vfun, ks, quad: QuadratureConfig):
    """``int_r^{t1} exp(i w_ki t2) V(t2) dt2`` for every outer node and level."""
    t1, w1 = _nodes(spec.r, spec.r + spec.T, quad.steps_outer, quad.rule)
    out = np.zeros((len(ks), t1.size), dtype=complex)
    for start in range(0, t1.size, _BLOCK):
        blk = slice(start, start + _BLOCK)
        t2, w2 = _nodes(spec.r, t1[blk], quad.steps_inner, quad.rule)
        base = w2 * vfun(t2)
        step = np.exp(1j * spec.omega0 * t2)
        # exp(i w_ki t2) for consecutive k by repeated multiplication
        ph = np.exp(1j * (spec.omega_k(ks[0]) - spec.omega_i) * t2)
        for n in range(len(ks)):
            out[n, blk] = np.sum(ph * base, axis=1)
            ph = ph * step
    return t1, w1, out


def direct_second_order(spec: TransitionSpec, model: PotentialModel, grid: DualGrid,
                        quad: QuadratureConfig = QuadratureConfig()) -> SpectralSignal:
    """Coupled double integral summed over k = -k_max..k_max, divided by k_max."""
    if spec.k_max < 1:
        raise ValueError("second order needs k_max >= 1")
    vfun = _potential(model, grid)
    ks = list(range(-spec.k_max, spec.k_max + 1))
    t1, w1, inner = _inner_integrals(spec, vfun, ks, quad)
    g = w1 * vfun(t1)
    outer = np.exp(1j * np.multiply.outer(grid.omegas, t1))
    acc = np.zeros(grid.n_samples, dtype=complex)
    for n, k in enumerate(ks):
        acc += outer @ (g * np.exp(-1j * spec.omega_k(k) * t1) * inner[n])
    pref = spec.A * spec.v_fk_ki / (1j * spec.hbar) ** 2 / spec.k_max
    return SpectralSignal(grid, acc * pref, "frequency", label="oracle_second")


# -- regression fixtures --------------------------------------------------------

def spec_hash(*parts) -> str:
    blob = json.dumps(parts, sort_keys=True, default=_jsonable).encode()
    return hashlib.sha256(blob).hexdigest()


def _jsonable(obj):
    if hasattr(obj, "__dataclass_fields__"):
        return {k: _jsonable(getattr(obj, k)) for k in obj.__dataclass_fields__
                if k != "samples"}
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def save_fixture(path, signal: SpectralSignal, **header) -> Path:
    path = Path(path)
    head = {"grid": signal.grid.params(), "domain": signal.domain, **header}
    np.savez(path, values=signal.values,
             header=np.array(json.dumps(head, sort_keys=True, default=_jsonable)))
    return path if path.suffix == ".npz" else path.with_suffix(".npz")


def load_fixture(path) -> tuple[SpectralSignal, dict]:
    with np.load(path) as data:
        head = json.loads(str(data["header"]))
        values = data["values"]
    g = head["grid"]
    grid = DualGrid(int(g["n_samples"]), float(g["dt"]))
    return SpectralSignal(grid, values, head["domain"]), head
