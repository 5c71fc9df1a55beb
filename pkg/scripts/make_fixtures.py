"""Regenerate the oracle regression fixtures under tests/fixtures/.

The fixtures pin the brute-force quadrature for the desk-scale Gaussian case
(N=128, k_max=4) so the second-order tests can compare against it without
re-running the double integral.
"""

import argparse
from pathlib import Path

from rftdyson.first_order import cyclotron_spec
from rftdyson.oracle import (QuadratureConfig, direct_first_order, direct_second_order,
                             save_fixture, spec_hash)
from rftdyson.potentials import PotentialModel
from rftdyson.spectral import DualGrid

ROOT = Path(__file__).resolve().parents[1]


def gaussian_case():
    grid = DualGrid(128, 1.0)
    spec = cyclotron_spec(grid, 2, r=-grid.t_total / 4, k_max=4)
    kick = PotentialModel.gaussian_kick(spec.T / 8)
    return grid, spec, kick, QuadratureConfig(1024, 1024)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=ROOT / "tests" / "fixtures")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    grid, spec, kick, quad = gaussian_case()
    digest = spec_hash(spec, kick, quad)
    for name, fn in (("first", direct_first_order), ("second", direct_second_order)):
        path = save_fixture(args.out / f"gaussian_n128_k4_{name}.npz",
                            fn(spec, kick, grid, quad), spec_hash=digest,
                            potential=kick.describe(), quadrature=quad)
        print(path)


if __name__ == "__main__":
    main()
