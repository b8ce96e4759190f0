#!/usr/bin/env python3
"""Hub-to-hub transfer as extra edges continuously turn on.

Sweeps the edge coupling c from 0 to 1 along three chains of graphs
(isolated side vertices to a cycle, isolated to a path, path to a
cycle) and writes one CSV per chain with a probability column per
side-set size.
"""

import argparse
import os
import sys

import numpy as np

from qwalk.explorer import interpolation_sweep


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", default="3,6", help="comma list of side-set sizes")
    ap.add_argument("--points", type=int, default=21, help="grid size on [0, 1]")
    ap.add_argument("--step", type=int, default=6, help="readout step")
    ap.add_argument("--out-dir", default=".")
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)

    n_values = [int(x) for x in args.n.split(",")]
    grid = np.linspace(0.0, 1.0, args.points)
    for chain in ("k2kn-k2cn", "k2kn-k2pn", "k2pn-k2cn"):
        res = interpolation_sweep(chain, n_values, grid, step=args.step)
        path = os.path.join(args.out_dir, f"interp_{chain}.csv")
        with open(path, "w") as fh:
            fh.write(",".join(["c"] + [f"p_n{n}" for n in res.n_values]) + "\n")
            for j, c in enumerate(res.c_grid):
                vals = [f"{res.probabilities[i, j]:.12g}" for i in range(len(n_values))]
                fh.write(",".join([f"{c:.12g}"] + vals) + "\n")
        ends = ", ".join(
            f"n={n}: P(0)={res.probabilities[i, 0]:.4f} P(1)={res.probabilities[i, -1]:.4f}"
            for i, n in enumerate(res.n_values)
        )
        print(f"{chain}: {ends}, wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
