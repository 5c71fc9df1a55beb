"""Second-order error against the oracle as the level cut-off k_max grows.

Prints, per k_max, the whole-grid relative L2 error and the absolute error on
the wings (|w - w_i| >= 2 w0) for the desk-scale Gaussian kick.
"""

import argparse

import numpy as np

from rftdyson.first_order import cyclotron_spec
from rftdyson.oracle import QuadratureConfig, direct_second_order
from rftdyson.potentials import PotentialModel
from rftdyson.second_order import second_order_amplitude
from rftdyson.spectral import DualGrid, relative_l2


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=128)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--kmax", type=int, nargs="+", default=list(range(4, 11)))
    ap.add_argument("--steps", type=int, default=1024)
    args = ap.parse_args()

    g = DualGrid(args.n, 1.0)
    quad = QuadratureConfig(args.steps, args.steps)
    print("k_max\trel_l2\twing_abs")
    for K in args.kmax:
        spec = cyclotron_spec(g, args.p, r=-g.t_total / (2 * args.p), k_max=K)
        kick = PotentialModel.gaussian_kick(spec.T / 8)
        rft = second_order_amplitude(spec, kick, g, k_eq_i_mode="literal")
        ref = direct_second_order(spec, kick, g, quad)
        wing = np.abs(g.omegas - spec.omega_i) >= 2 * spec.omega0
        err = np.linalg.norm((rft.values - ref.values)[wing]) * np.sqrt(g.dw)
        print(f"{K}\t{relative_l2(rft, ref):.3e}\t{err:.3e}", flush=True)


if __name__ == "__main__":
    main()
