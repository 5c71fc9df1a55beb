"""First-order pipeline against the oracle while the quadrature is refined.

Shows where the disagreement comes from: errors that fall by 4x per doubling
belong to the trapezoid oracle, errors that stall belong to the sampled
potential.  Keep --max-steps at 16384 or below on small machines.
"""

import argparse

from rftdyson.first_order import cyclotron_spec, first_order_amplitude
from rftdyson.oracle import QuadratureConfig, direct_first_order
from rftdyson.potentials import PotentialModel
from rftdyson.spectral import DualGrid, relative_l2


def catalog(g, spec):
    return {
        "gaussian": PotentialModel.gaussian_kick(spec.T / 8),
        "harmonic": PotentialModel.harmonic_drive(3 * spec.omega0),
        "ramped": PotentialModel.ramped_oscillator(3 * spec.omega0, 4 * g.dw,
                                                   "two_sided"),
        "constant": PotentialModel.constant_bias(0.05),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1024)
    ap.add_argument("--dt", type=float, default=1.0)
    ap.add_argument("--max-steps", type=int, default=16384)
    args = ap.parse_args()

    g = DualGrid(args.n, args.dt)
    spec = cyclotron_spec(g, 8, i_index=1, r=-g.t_total / 16)
    steps = []
    s = 1024
    while s <= args.max_steps:
        steps.append(s)
        s *= 2
    print("potential\t" + "\t".join(map(str, steps)))
    for name, model in catalog(g, spec).items():
        rft = first_order_amplitude(spec, model, g)
        errs = [relative_l2(rft, direct_first_order(spec, model, g, QuadratureConfig(n)))
                for n in steps]
        print(name + "\t" + "\t".join(f"{e:.2e}" for e in errs), flush=True)


if __name__ == "__main__":
    main()
