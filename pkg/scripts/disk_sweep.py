"""Sweep the disk family and print all machine outputs side by side.

The inner set is a disk of radius nu in arrow form, the outer the unit
disk in rotation form, so the order-2 bound is lossy above 1/sqrt(2)
while order 3 tracks the true margin 1 - nu.

Usage: python scripts/disk_sweep.py [--lo 0.5] [--hi 1.2] [--step 0.05]
"""

import argparse

import numpy as np

from spectracon.families import disk_pair
from spectracon.momrelax import solve_mu_mom
from spectracon.posmap import cp_sdfp
from spectracon.sosrelax import lambda_sos


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lo", type=float, default=0.5)
    ap.add_argument("--hi", type=float, default=1.2)
    ap.add_argument("--step", type=float, default=0.05)
    ap.add_argument("--order3", action="store_true",
                    help="add the order-3 moment column")
    args = ap.parse_args()

    cols = "nu      mu_2        lambda_0    sdfp"
    if args.order3:
        cols += "          mu_3"
    print(cols)
    for nu in np.arange(args.lo, args.hi + args.step / 2, args.step):
        a, b = disk_pair(float(nu))
        m2 = solve_mu_mom(a, b, 2)
        lam = lambda_sos(a, b, 0)
        cert = cp_sdfp(a, b)
        row = (f"{nu:.3f}  {m2.value:+.6f}  {lam.value:+.6f}  "
               f"{cert.kind:12s}")
        if args.order3:
            m3 = solve_mu_mom(a, b, 3)
            row += f"  {m3.value:+.6f}"
        print(row)


if __name__ == "__main__":
    main()
