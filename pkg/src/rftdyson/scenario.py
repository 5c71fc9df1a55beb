"""Declarative scenario files (TOML) and their validation.

Frequencies may be written as plain numbers or with a unit suffix: ``"12 dw"``
(grid steps) or ``"1.5 w0"`` (level spacings); ``omega0`` itself also accepts
``"fund"``, the window fundamental 2 pi / T.  Durations accept ``"dt"`` and
``"T"`` suffixes.  The window is given either as ``T`` or as a pad factor
``p`` with ``T = t_total / p``.

Layout::

    name = "golden_rule_1"
    description = "..."
    run = ["golden_rule_1", "oracle_first", "compare"]

    [grid]        n_samples, dt
    [spec]        omega0, p | T, i_index, r, k_max, v_fi, v_fk_ki, A, cyclotron
    [potential]   kind, strength and per-kind parameters
    [drive]       omega_d, strength             (golden_rule_1, golden_rule_2)
    [bardeen]     eV0, strength, skip_pole
    [oracle]      steps_outer, steps_inner, rule
    [second_order] k_eq_i_mode, edge, bias
    [jsa]         FwmConfig fields
    [[compare]]   a, b
"""

from __future__ import annotations

import hashlib
import json
import re
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .first_order import TransitionSpec
from .jsa import FwmConfig
from .oracle import QuadratureConfig
from .potentials import PotentialModel, load_tabulated
from .spectral import DualGrid

TASKS = ("first_order", "second_order", "oracle_first", "oracle_second",
         "golden_rule_1", "golden_rule_2", "bardeen_1", "bardeen_2", "jsa",
         "compare", "transfer_dump")

_SECTIONS = {"grid", "spec", "potential", "drive", "bardeen", "oracle",
             "second_order", "jsa", "compare"}
_QUANTITY = re.compile(r"^\s*([-+0-9.eE]+)\s*([A-Za-z0-9_]*)\s*$")


class ScenarioParseError(ValueError):
    """The file is not a well-formed scenario (CLI exit code 2)."""


class ScenarioInvariantError(ValueError):
    """The scenario is well formed but violates a numerical invariant (exit 3)."""


@dataclass
class Scenario:
    name: str
    grid: DualGrid | None
    run: list
    raw: dict
    description: str = ""
    spec: TransitionSpec | None = None
    potential: PotentialModel | None = None
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    fwm: FwmConfig | None = None
    source: Path | None = None

    def config_hash(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()

    def section(self, name: str) -> dict:
        return dict(self.raw.get(name, {}))


def _quantity(value, units: dict, what: str) -> float:
    if isinstance(value, bool):
        raise ScenarioParseError(f"{what}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ScenarioParseError(f"{what}: expected a number, got {value!r}")
    m = _QUANTITY.match(value)
    if not m:
        raise ScenarioParseError(f"{what}: cannot parse {value!r}")
    try:
        num = float(m.group(1))
    except ValueError:
        raise ScenarioParseError(f"{what}: cannot parse {value!r}") from None
    unit = m.group(2)
    if not unit:
        return num
    if unit not in units:
        raise ScenarioParseError(f"{what}: unknown unit {unit!r} "
                                 f"(expected one of {sorted(units)})")
    return num * units[unit]


def _pop(d: dict, key: str, default=None, required: bool = False, where: str = ""):
    if key in d:
        return d.pop(key)
    if required:
        raise ScenarioInvariantError(f"[{where}] is missing required key {key!r}")
    return default


def _no_leftovers(d: dict, where: str) -> None:
    if d:
        raise ScenarioParseError(f"[{where}] has unknown keys: {sorted(d)}")


def _build_grid(raw: dict) -> DualGrid:
    g = dict(raw.get("grid", {}))
    n = _pop(g, "n_samples", required=True, where="grid")
    dt = _pop(g, "dt", 1.0)
    _no_leftovers(g, "grid")
    if not isinstance(n, int) or isinstance(n, bool):
        raise ScenarioParseError("[grid] n_samples must be an integer")
    try:
        return DualGrid(n, float(dt))
    except (TypeError, ValueError) as exc:
        raise ScenarioInvariantError(f"[grid] {exc}") from None


def _build_spec(raw: dict, grid: DualGrid) -> TransitionSpec | None:
    if "spec" not in raw:
        return None
    s = dict(raw["spec"])
    if "p" in s and "T" in s:
        raise ScenarioParseError("[spec] give either p or T, not both")
    if "p" in s:
        p = s.pop("p")
        if not isinstance(p, int) or isinstance(p, bool) or p < 1:
            raise ScenarioParseError("[spec] p must be a positive integer")
        T = grid.t_total / p
    else:
        T = _quantity(_pop(s, "T", required=True, where="spec"),
                      {"dt": grid.dt}, "T")
    r = _quantity(_pop(s, "r", 0.0), {"dt": grid.dt, "T": T}, "r")
    # "fund" is the window's fundamental 2 pi / T
    omega0 = _quantity(_pop(s, "omega0", required=True, where="spec"),
                       {"dw": grid.dw, "fund": 2 * np.pi / T}, "omega0")
    kw = dict(omega0=omega0, T=T, r=r,
              i_index=int(_pop(s, "i_index", 0)),
              k_max=int(_pop(s, "k_max", 1)),
              v_fi=complex(_pop(s, "v_fi", 1.0)),
              v_fk_ki=complex(_pop(s, "v_fk_ki", 1.0)),
              A=complex(_pop(s, "A", 1.0)),
              cyclotron=bool(_pop(s, "cyclotron", False)),
              fund_convention=str(_pop(s, "fund_convention", "angular")))
    _no_leftovers(s, "spec")
    return TransitionSpec(**kw)


def _freq_units(grid: DualGrid, spec: TransitionSpec | None) -> dict:
    units = {"dw": grid.dw}
    if spec is not None:
        units["w0"] = spec.omega0
    return units


def _build_potential(raw: dict, grid: DualGrid, spec, base: Path | None):
    if "potential" not in raw:
        return None
    p = dict(raw["potential"])
    kind = _pop(p, "kind", required=True, where="potential")
    strength = float(_pop(p, "strength", 0.05))
    freq = _freq_units(grid, spec)
    times = {"dt": grid.dt}
    if spec is not None:
        times["T"] = spec.T
    try:
        if kind == "gaussian_kick":
            m = PotentialModel.gaussian_kick(
                _quantity(_pop(p, "tau", required=True, where="potential"), times,
                          "tau"),
                strength, _quantity(_pop(p, "center", 0.0), times, "center"))
        elif kind == "harmonic_drive":
            m = PotentialModel.harmonic_drive(
                _quantity(_pop(p, "omega_d", required=True, where="potential"), freq,
                          "omega_d"),
                strength, bool(_pop(p, "resonant_only", False)))
        elif kind == "ramped_oscillator":
            m = PotentialModel.ramped_oscillator(
                _quantity(_pop(p, "omega_d", required=True, where="potential"), freq,
                          "omega_d"),
                _quantity(_pop(p, "eps", required=True, where="potential"), freq,
                          "eps"),
                _pop(p, "ramp", required=True, where="potential"), strength)
        elif kind == "constant_bias":
            m = PotentialModel.constant_bias(strength)
        elif kind == "tabulated":
            path = Path(_pop(p, "file", required=True, where="potential"))
            if base is not None and not path.is_absolute():
                path = base / path
            m = load_tabulated(path, grid, strength)
        else:
            raise ScenarioParseError(f"[potential] unknown kind {kind!r}")
    except ScenarioParseError:
        raise
    except ValueError as exc:
        raise ScenarioInvariantError(f"[potential] {exc}") from None
    _no_leftovers(p, "potential")
    return m


def _build_quad(raw: dict) -> QuadratureConfig:
    q = dict(raw.get("oracle", {}))
    kw = {k: q.pop(k) for k in ("steps_outer", "steps_inner", "rule") if k in q}
    _no_leftovers(q, "oracle")
    try:
        return QuadratureConfig(**kw)
    except ValueError as exc:
        raise ScenarioInvariantError(f"[oracle] {exc}") from None


def _build_fwm(raw: dict) -> FwmConfig | None:
    if "jsa" not in raw:
        return None
    j = dict(raw["jsa"])
    j.pop("steps_z", None)
    j.pop("steps_t", None)
    j.pop("pump_dispersion", None)
    try:
        cfg = FwmConfig(**j)
    except TypeError as exc:
        raise ScenarioParseError(f"[jsa] {exc}") from None
    except ValueError as exc:
        raise ScenarioInvariantError(f"[jsa] {exc}") from None
    return cfg


_NEEDS = {
    "first_order": ("spec", "potential"),
    "second_order": ("spec", "potential"),
    "oracle_first": ("spec", "potential"),
    "oracle_second": ("spec", "potential"),
    "golden_rule_1": ("spec", "drive"),
    "golden_rule_2": ("spec", "drive"),
    "bardeen_1": ("spec", "bardeen"),
    "bardeen_2": ("spec", "bardeen"),
    "jsa": ("jsa",),
    "compare": ("compare",),
    "transfer_dump": ("spec", "potential"),
}


def parse_scenario(text: str, source: Path | None = None) -> Scenario:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioParseError(f"invalid TOML: {exc}") from None
    top = {"name", "description", "run"} | _SECTIONS
    unknown = set(raw) - top
    if unknown:
        raise ScenarioParseError(f"unknown top-level keys: {sorted(unknown)}")
    name = raw.get("name")
    if not isinstance(name, str) or not name:
        raise ScenarioParseError("scenario needs a non-empty name")
    run = raw.get("run")
    if not isinstance(run, list) or not run:
        raise ScenarioParseError("scenario needs a non-empty run list")
    for task in run:
        if task not in TASKS:
            raise ScenarioParseError(f"unknown task {task!r}; known: {TASKS}")
        needs = _NEEDS[task] + (("grid",) if "spec" in _NEEDS[task] else ())
        for need in needs:
            if need not in raw:
                raise ScenarioInvariantError(
                    f"task {task!r} needs a [{need}] section")
    base = source.parent if source is not None else None
    grid = _build_grid(raw) if "grid" in raw else None
    if grid is None:
        needy = [k for k in ("spec", "potential", "drive", "bardeen") if k in raw]
        if needy:
            raise ScenarioInvariantError(f"sections {needy} need a [grid] section")
    spec = _build_spec(raw, grid) if grid is not None else None
    sc = Scenario(name=name, grid=grid, run=list(run), raw=raw,
                  description=str(raw.get("description", "")), spec=spec,
                  potential=_build_potential(raw, grid, spec, base),
                  quad=_build_quad(raw), fwm=_build_fwm(raw), source=source)
    validate(sc)
    return sc


def validate(sc: Scenario) -> None:
    """Check every alignment invariant before anything is computed."""
    try:
        if sc.spec is not None:
            sc.spec.validate(sc.grid)
        if sc.potential is not None:
            sc.potential.spikes(sc.grid)
            if sc.spec is not None and any(t in sc.run for t in
                                           ("second_order", "oracle_second",
                                            "transfer_dump")) and sc.spec.k_max < 1:
                raise ValueError("second-order tasks need k_max >= 1")
        for key, qty in (("drive", "omega_d"), ("bardeen", "eV0"),
                         ("second_order", "bias")):
            if key in sc.raw:
                sec = sc.section(key)
                if key == "second_order" and qty not in sec:
                    continue
                if qty not in sec:
                    raise ScenarioInvariantError(f"[{key}] needs {qty}")
                val = _quantity(sec[qty], _freq_units(sc.grid, sc.spec), qty)
                if not sc.grid.is_aligned(val):
                    raise ValueError(f"[{key}] {qty}={val} is not aligned with "
                                     f"dw={sc.grid.dw}")
        if sc.fwm is not None:
            sc.fwm.validate()
        pairs = sc.raw.get("compare", [])
        if "compare" in sc.run:
            if not isinstance(pairs, list) or not pairs:
                raise ScenarioInvariantError("compare task needs [[compare]] entries")
            for pair in pairs:
                for side in ("a", "b"):
                    t = pair.get(side)
                    if t not in sc.run or t in ("compare", "jsa", "transfer_dump"):
                        raise ScenarioInvariantError(
                            f"compare {side}={t!r} must name a distribution task "
                            f"that runs earlier")
                    if sc.run.index(t) > sc.run.index("compare"):
                        raise ScenarioInvariantError(
                            f"compare {side}={t!r} runs after the compare task")
    except ScenarioInvariantError:
        raise
    except ScenarioParseError:
        raise
    except ValueError as exc:
        raise ScenarioInvariantError(str(exc)) from None


def frequency(sc: Scenario, section: str, key: str, default=None) -> float:
    sec = sc.section(section)
    if key not in sec:
        if default is None:
            raise ScenarioInvariantError(f"[{section}] needs {key}")
        return default
    return _quantity(sec[key], _freq_units(sc.grid, sc.spec), key)


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioParseError(f"cannot read {path}: {exc}") from None
    return parse_scenario(text, source=path)


def bundled_scenarios() -> dict:
    """Name -> path of the scenarios shipped with the package."""
    root = resources.files("rftdyson") / "scenarios"
    return {Path(p.name).stem: Path(str(p)) for p in sorted(root.iterdir(),
                                                             key=lambda q: q.name)
            if p.name.endswith(".toml")}


def resolve(name_or_path: str) -> Path:
    p = Path(name_or_path)
    if p.exists():
        return p
    found = bundled_scenarios().get(name_or_path)
    if found is None:
        raise ScenarioParseError(f"no scenario file or bundled scenario named "
                                 f"{name_or_path!r}")
    return found
