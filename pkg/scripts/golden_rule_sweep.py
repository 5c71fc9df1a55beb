"""Peak height and position of the second-order golden rule versus window length.

In the cyclotron configuration w0 = 2 pi / T, so w0 shrinks as T grows and the
peak at w_i + 2 w_d should grow as T^2.  Pass --fixed-w0 to hold the level
spacing fixed instead and watch the peak wander towards the tails.
"""

import argparse

import numpy as np

from rftdyson.analysis import linear_fit
from rftdyson.first_order import TransitionSpec, cyclotron_spec
from rftdyson.second_order import second_order_golden_rule
from rftdyson.spectral import DualGrid


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=8192)
    ap.add_argument("--p", type=int, nargs="+", default=[128, 64, 32, 16])
    ap.add_argument("--kmax", type=int, default=10)
    ap.add_argument("--fixed-w0", action="store_true")
    args = ap.parse_args()

    g = DualGrid(args.n, 1.0)
    w0_fixed = max(args.p) * g.dw
    rows = []
    print("T\tpeak\toffset_bins")
    for p in args.p:
        if args.fixed_w0:
            spec = TransitionSpec(omega0=w0_fixed, T=g.t_total / p, k_max=args.kmax)
        else:
            spec = cyclotron_spec(g, p, k_max=args.kmax)
        wd = 1.5 * spec.omega0
        gr = second_order_golden_rule(spec, wd, g)
        mag = np.abs(gr.values)
        off = int(np.argmax(mag)) - g.index_of(spec.omega_i + 2 * wd)
        peak = abs(gr.at(spec.omega_i + 2 * wd))
        rows.append((spec.T, peak))
        print(f"{spec.T:g}\t{peak:.6e}\t{off}", flush=True)
    T, peak = map(np.array, zip(*rows))
    coef, r2 = linear_fit(np.log(T), np.log(peak))
    print(f"log-log slope {coef[0]:.4f} (R^2 {r2:.6f})")


if __name__ == "__main__":
    main()
