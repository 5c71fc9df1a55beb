"""Comparison reports and the small measurements the benchmarks rely on."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .spectral import GridMismatchError, SpectralSignal


@dataclass(frozen=True)
class ComparisonReport:
    method_a: str
    method_b: str
    relative_l2: float
    max_abs_diff: float
    peak_location_diff_bins: int
    runtime_a: float = float("nan")
    runtime_b: float = float("nan")

    def as_dict(self) -> dict:
        return asdict(self)

    def to_text(self) -> str:
        return "".join(f"{k}\t{v}\n" for k, v in self.as_dict().items())


def compare(a: SpectralSignal, b: SpectralSignal, method_a: str = "a",
            method_b: str = "b", runtime_a: float = float("nan"),
            runtime_b: float = float("nan")) -> ComparisonReport:
    """Relative L2 of ``a`` against ``b`` (pass the oracle as ``b``)."""
    if a.grid != b.grid:
        raise GridMismatchError("compared signals live on different grids")
    diff = a.values - b.values
    nb = np.linalg.norm(b.values)
    rel = float(np.linalg.norm(diff) / nb) if nb > 0 else \
        (0.0 if not diff.any() else float("inf"))
    shift = int(np.argmax(np.abs(a.values))) - int(np.argmax(np.abs(b.values)))
    return ComparisonReport(method_a, method_b, rel, float(np.abs(diff).max()),
                            shift, runtime_a, runtime_b)


def peak_omega(signal: SpectralSignal) -> float:
    return float(signal.grid.omegas[np.argmax(np.abs(signal.values))])


def fwhm(x: np.ndarray, y: np.ndarray) -> float:
    """Full width at half maximum of the main peak of ``y >= 0``.

    The half-level crossings are located by linear interpolation.
    """
    y = np.asarray(y, dtype=float)
    i = int(np.argmax(y))
    half = y[i] / 2
    lo = i
    while lo > 0 and y[lo - 1] > half:
        lo -= 1
    hi = i
    while hi < y.size - 1 and y[hi + 1] > half:
        hi += 1
    if lo == 0 or hi == y.size - 1:
        raise ValueError("peak runs into the edge of the axis")

    def cross(j0, j1):
        return x[j0] + (half - y[j0]) * (x[j1] - x[j0]) / (y[j1] - y[j0])

    return float(cross(hi, hi + 1) - cross(lo, lo - 1))


def zero_crossings(x: np.ndarray, y: np.ndarray, rising: bool | None = None
                   ) -> np.ndarray:
    """Interpolated sign changes of a real sequence.

    ``rising=True`` keeps only upward crossings, ``False`` only downward ones.
    """
    y = np.asarray(y, dtype=float)
    s = np.signbit(y)
    idx = np.nonzero(s[:-1] != s[1:])[0]
    if rising is not None:
        up = y[idx + 1] > y[idx]
        idx = idx[up] if rising else idx[~up]
    return x[idx] - y[idx] * (x[idx + 1] - x[idx]) / (y[idx + 1] - y[idx])


def linear_fit(x, y, through_origin: bool = False) -> tuple[np.ndarray, float]:
    """Least-squares line and its coefficient of determination."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    cols = [x] if through_origin else [x, np.ones_like(x)]
    A = np.column_stack(cols)
    coef = np.linalg.lstsq(A, y, rcond=None)[0]
    ss_res = float(np.sum((A @ coef - y) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    return coef, 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0


def inverse_law_fit(k, mags) -> tuple[float, float, float]:
    """Fit ``mags ~ C / |k|``; returns C, R^2 and the worst relative deviation."""
    k = np.abs(np.asarray(k, dtype=float))
    mags = np.asarray(mags, dtype=float)
    coef, r2 = linear_fit(1.0 / k, mags, through_origin=True)
    c = float(coef[0])
    worst = float(np.max(np.abs(mags * k / c - 1.0)))
    return c, r2, worst
