#!/usr/bin/env python3
"""Classify the curated measure suite across the three embedding regimes.

For each measure and each (p, q) pair the script prints the regime, the
verdict, the vanishing flag, and the three-way comparability band when
one is available.
"""

import argparse
import math

import focksobolev as fs


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1, choices=(1, 2))
    ap.add_argument("--m", type=int, default=0)
    ap.add_argument("--alpha", type=float, default=1.0)
    args = ap.parse_args()

    pairs = [(2.0, 2.0), (1.0, 2.0), (4.0, 2.0), (math.inf, 2.0)]
    print(f"{'measure':<14} {'p':>5} {'q':>3} {'regime':<9} "
          f"{'carleson':>8} {'vanishing':>9} {'band':>8}")
    for scen in fs.measure_suite(args.n):
        for p, q in pairs:
            params = fs.Params(n=args.n, alpha=args.alpha, m=args.m, p=p, q=q)
            v = fs.classify_carleson(scen.measure, params)
            band = f"{v.comparability_band:.3f}" if v.comparability_band else "-"
            print(f"{scen.name:<14} {p:>5} {q:>3} {v.regime:<9} "
                  f"{str(v.is_carleson):>8} {str(v.is_vanishing):>9} {band:>8}")


if __name__ == "__main__":
    main()
