"""Command-line front end: ``rftdyson run | compare | list-scenarios``.

Exit codes: 0 success, 2 malformed scenario or arguments, 3 invariant
violation, 4 non-finite numbers in a result.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import compare, inverse_law_fit
from .first_order import (WindowError, bardeen_first_order, biased,
                          first_order_amplitude)
from .jsa import FwmError, FwmQuadrature, jsa_direct, jsa_reference, jsa_rft, save_map
from .oracle import direct_first_order, direct_second_order
from .potentials import PotentialError, PotentialModel
from .scenario import (Scenario, ScenarioInvariantError, ScenarioParseError,
                       bundled_scenarios, frequency, load_scenario, resolve)
from .second_order import (SecondOrderParts, bardeen_second_order,
                           second_order_amplitude, second_order_golden_rule)
from .spectral import GridMismatchError, SpectralSignal, shift

EXIT_OK, EXIT_PARSE, EXIT_INVARIANT, EXIT_NUMERIC = 0, 2, 3, 4
HEADER = "omega\tre\tim\tabs\tabs2"


class NumericFailure(RuntimeError):
    pass


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def format_table(axis, values, head: str = HEADER) -> str:
    values = np.asarray(values, dtype=complex)
    if not np.all(np.isfinite(values)):
        raise NumericFailure("non-finite values in output")
    lines = [head]
    for w, v in zip(axis, values):
        a = abs(v)
        lines.append("\t".join(map(_fmt, (w, v.real, v.imag, a, a * a))))
    return "\n".join(lines) + "\n"


def read_table(path) -> tuple[np.ndarray, np.ndarray]:
    rows = Path(path).read_text(encoding="utf-8").splitlines()
    if not rows or rows[0].split("\t")[:3] != HEADER.split("\t")[:3]:
        raise ScenarioParseError(f"{path}: not a distribution table")
    data = np.array([[float(x) for x in r.split("\t")[:3]] for r in rows[1:] if r])
    return data[:, 0], data[:, 1] + 1j * data[:, 2]


class Runner:
    def __init__(self, sc: Scenario, out: Path, quiet: bool = False):
        self.sc = sc
        self.out = out
        self.quiet = quiet
        self.results: dict[str, SpectralSignal] = {}
        self.runtimes: dict[str, float] = {}
        self.tables: list[Path] = []

    def log(self, msg: str) -> None:
        if not self.quiet:
            print(msg, file=sys.stderr)

    def write(self, name: str, text: str, table: bool = True) -> Path:
        path = self.out / name
        path.write_text(text, encoding="utf-8")
        if table:
            self.tables.append(path)
        return path

    def emit(self, task: str, sig: SpectralSignal) -> None:
        self.results[task] = sig
        self.write(f"{task}.tsv", format_table(sig.grid.omegas, sig.values))

    # -- tasks ------------------------------------------------------------------

    def first_order(self):
        return first_order_amplitude(self.sc.spec, self.sc.potential, self.sc.grid)

    def second_order(self):
        opts = self.sc.section("second_order")
        spec = self.sc.spec
        if "bias" in opts:
            spec = biased(spec, frequency(self.sc, "second_order", "bias"))
        return second_order_amplitude(spec, self.sc.potential, self.sc.grid,
                                      k_eq_i_mode=opts.get("k_eq_i_mode", "paper"),
                                      edge=opts.get("edge", "average"))

    def oracle_first(self):
        return direct_first_order(self.sc.spec, self.sc.potential, self.sc.grid,
                                  self.sc.quad)

    def oracle_second(self):
        return direct_second_order(self.sc.spec, self.sc.potential, self.sc.grid,
                                   self.sc.quad)

    def _drive_strength(self) -> float:
        return float(self.sc.section("drive").get("strength", 1.0))

    def golden_rule_1(self):
        wd = frequency(self.sc, "drive", "omega_d")
        model = PotentialModel.harmonic_drive(wd, self._drive_strength(),
                                              resonant_only=True)
        return first_order_amplitude(self.sc.spec, model, self.sc.grid)

    def golden_rule_2(self):
        wd = frequency(self.sc, "drive", "omega_d")
        diag: dict = {}
        sig = second_order_golden_rule(self.sc.spec, wd, self.sc.grid,
                                       self._drive_strength(), diagnostics=diag)
        self.write("golden_rule_2_diagnostics.tsv",
                   "skipped_k\n" + "".join(f"{k}\n" for k in diag["skipped_k"]))
        return sig

    def _bardeen(self):
        sec = self.sc.section("bardeen")
        return (frequency(self.sc, "bardeen", "eV0"),
                float(sec.get("strength", 1.0)), bool(sec.get("skip_pole", False)))

    def bardeen_1(self):
        eV0, s, _ = self._bardeen()
        return bardeen_first_order(self.sc.spec, eV0, self.sc.grid, s)

    def bardeen_2(self):
        eV0, s, skip = self._bardeen()
        return bardeen_second_order(self.sc.spec, eV0, self.sc.grid, s, skip)

    def jsa(self):
        cfg = self.sc.fwm
        sec = self.sc.section("jsa")
        quad = FwmQuadrature(int(sec.get("steps_z", 256)), int(sec.get("steps_t", 1024)))
        maps = {"jsa_rft": jsa_rft(cfg, bool(sec.get("pump_dispersion", True))),
                "jsa_direct": jsa_direct(cfg, quad)}
        if cfg.fiber_approx:
            maps["jsa_reference"] = jsa_reference(cfg)
        for name, F in maps.items():
            if not np.all(np.isfinite(F)):
                raise NumericFailure(f"non-finite values in {name}")
            path, side = save_map(self.out / f"{name}.tsv", F, cfg)
            self.tables += [path, side]
        names = list(maps)
        lines = ["method_a\tmethod_b\trelative_l2"]
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                rel = np.linalg.norm(maps[a] - maps[b]) / np.linalg.norm(maps[b])
                lines.append(f"{a}\t{b}\t{_fmt(rel)}")
        self.write("jsa_report.tsv", "\n".join(lines) + "\n")
        return None

    def transfer_dump(self):
        sc = self.sc
        parts = SecondOrderParts()
        opts = sc.section("second_order")
        second_order_amplitude(sc.spec, sc.potential, sc.grid,
                               k_eq_i_mode=opts.get("k_eq_i_mode", "paper"),
                               edge=opts.get("edge", "average"),
                               parts=parts)
        d = self.out / "transfer"
        d.mkdir(exist_ok=True)
        for k, tr in parts.traces.items():
            self._dump(d / f"psi_k{k:+d}.tsv", tr.widths, tr.values, "width")
            tf = parts.transfers[k]
            if tf.padded is not None:
                self._dump(d / f"padded_k{k:+d}.tsv", tr.dt * np.arange(tf.padded.size),
                           tf.padded, "t")
            self._dump(d / f"Psi_k{k:+d}.tsv", sc.grid.omegas, tf.values.values)
        # k-summed spike profile on the level lattice, and the origin spike of
        # the partial sums |k| <= K before the 1/k_max rescale
        spec, dw = sc.spec, sc.grid.dw
        shifted = {k: shift(tf.values, spec.omega_k(k)).values * dw
                   for k, tf in parts.transfers.items()}
        total = sum(shifted[k] for k in sorted(shifted))
        lattice = np.arange(-spec.k_max, spec.k_max + 1)
        prof = [total[sc.grid.index_of(spec.omega_i + n * spec.omega0)]
                for n in lattice]
        self._dump(d / "harmonic_profile.tsv", lattice, prof, "lattice_k")
        off = [(n, abs(v.imag)) for n, v in zip(lattice, prof) if abs(n) >= 2]
        if off:
            c, r2, worst = inverse_law_fit([n for n, _ in off], [m for _, m in off])
            self.write("transfer/harmonic_fit.tsv",
                       "law\tC\tr2\tworst_rel_dev\n"
                       f"C/|k|\t{_fmt(c)}\t{_fmt(r2)}\t{_fmt(worst)}\n")
        origin = sc.grid.index_of(spec.omega_i)
        partial = [sum(shifted[k][origin] for k in range(-K, K + 1))
                   for K in range(1, spec.k_max + 1)]
        self._dump(d / "origin_vs_kmax.tsv", np.arange(1, spec.k_max + 1), partial,
                   "k_max")
        return None

    def _dump(self, path: Path, axis, values, name: str = "omega") -> None:
        head = HEADER.replace("omega", name, 1)
        path.write_text(format_table(axis, values, head), encoding="utf-8")
        self.tables.append(path)

    def compare(self):
        for pair in self.sc.raw["compare"]:
            a, b = pair["a"], pair["b"]
            # the oracle side is always the reference
            if a.startswith("oracle") and not b.startswith("oracle"):
                a, b = b, a
            rep = compare(self.results[a], self.results[b], a, b,
                          self.runtimes[a], self.runtimes[b])
            self.write(f"compare_{a}_vs_{b}.tsv", rep.to_text(), table=False)
            self.log(f"compare {a} vs {b}: relative_l2={rep.relative_l2:.3e}")
        return None

    # -- driver -----------------------------------------------------------------

    def run(self) -> None:
        self.out.mkdir(parents=True, exist_ok=True)
        for task in self.sc.run:
            t0 = time.perf_counter()
            sig = getattr(self, task)()
            self.runtimes[task] = time.perf_counter() - t0
            if sig is not None:
                if not np.all(np.isfinite(sig.values)):
                    raise NumericFailure(f"task {task} produced non-finite values")
                self.emit(task, sig)
            self.log(f"{task}: {self.runtimes[task]:.3f} s")
        self.write("manifest.txt", self.manifest(), table=False)

    def manifest(self) -> str:
        sc = self.sc
        lines = [f"scenario\t{sc.name}",
                 f"version\tv{__version__}",
                 f"config_sha256\t{sc.config_hash()}"]
        grid = sc.grid if sc.grid is not None else sc.fwm.sum_grid
        lines += [f"grid.{k}\t{_fmt(v) if isinstance(v, float) else v}"
                  for k, v in grid.params().items()]
        lines.append(f"tasks\t{','.join(sc.run)}")
        for p in sorted(self.tables):
            digest = hashlib.sha256(p.read_bytes()).hexdigest()
            lines.append(f"table\t{p.relative_to(self.out)}\t{digest}")
        return "\n".join(lines) + "\n"


def _run(args) -> int:
    sc = load_scenario(resolve(args.scenario))
    out = Path(args.out) if args.out else Path("runs") / sc.name
    Runner(sc, out, args.quiet).run()
    if not args.quiet:
        print(out)
    return EXIT_OK


def _compare(args) -> int:
    wa, va = read_table(args.file_a)
    wb, vb = read_table(args.file_b)
    if wa.shape != wb.shape or not np.array_equal(wa, wb):
        raise GridMismatchError("tables live on different frequency axes")
    diff = va - vb
    nb = np.linalg.norm(vb)
    print(f"relative_l2\t{_fmt(np.linalg.norm(diff) / nb if nb else float('inf'))}")
    print(f"max_abs_diff\t{_fmt(np.abs(diff).max())}")
    print(f"peak_location_diff_bins\t{int(np.argmax(abs(va)) - np.argmax(abs(vb)))}")
    return EXIT_OK


def _list(args) -> int:
    for name, path in bundled_scenarios().items():
        try:
            desc = load_scenario(path).description
        except ValueError as exc:
            desc = f"(invalid: {exc})"
        print(f"{name}\t{desc}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rftdyson", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"rftdyson {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario file or bundled scenario")
    r.add_argument("scenario")
    r.add_argument("--out", help="output directory (default runs/<name>)")
    r.add_argument("--quiet", action="store_true")
    r.set_defaults(func=_run)
    c = sub.add_parser("compare", help="compare two distribution tables")
    c.add_argument("file_a")
    c.add_argument("file_b", help="reference side")
    c.set_defaults(func=_compare)
    ls = sub.add_parser("list-scenarios", help="list bundled scenarios")
    ls.set_defaults(func=_list)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ScenarioParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NumericFailure, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ScenarioInvariantError, WindowError, PotentialError, FwmError,
            GridMismatchError, ZeroDivisionError, ValueError) as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
