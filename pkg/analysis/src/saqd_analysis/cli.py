"""Command-line interface: `saqd-analyze fit` and `saqd-analyze plot`."""

from __future__ import annotations

import argparse
import sys

from .figures import render_figures
from .fss import crossing_estimate, fss_fit
from .io import read_results


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="saqd-analyze", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    fit = sub.add_parser("fit", help="finite-size-scaling threshold fit")
    fit.add_argument("csv")
    fit.add_argument("--bootstrap", type=int, default=100)
    plot = sub.add_parser("plot", help="render the four results panels")
    plot.add_argument("csv")
    plot.add_argument("--outdir", default="figs")
    args = ap.parse_args(argv)

    if args.command == "fit":
        points = read_results(args.csv)
        result = fss_fit(points, n_bootstrap=args.bootstrap)
        p_cross, u_cross = crossing_estimate(points)
        print(f"fss fit:  p_th = {result.p_th:.6f} +- {result.uncertainty:.6f}"
              f"  (nu = {result.nu:.3f})")
        print(f"crossing: p_th = {p_cross:.6f} +- {u_cross:.6f}")
        return 0
    if args.command == "plot":
        for path in render_figures(args.csv, args.outdir):
            print(path)
        return 0
    return 2


if __name__ == "__main__":
    sys.exit(main())
