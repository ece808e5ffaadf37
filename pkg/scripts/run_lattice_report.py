#!/usr/bin/env python3
"""Build separated lattices across a small parameter grid and audit them.

Prints one row per (n, r) with the point count, measured minimum pair
separation, covering failures from a random probe sweep, and the overlap
multiplicity of the doubled balls.
"""

import argparse

import numpy as np

import focksobolev as fs


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--domain-radius", type=float, default=6.0)
    ap.add_argument("--probes", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args()

    print(f"{'n':>2} {'r':>5} {'points':>8} {'min sep':>9} "
          f"{'uncovered':>9} {'N_max':>6} {'bound':>6}")
    for n in (1, 2):
        for r in (0.5, 1.0):
            lat = fs.make_lattice(args.domain_radius, r, n=n)
            rep = fs.verify_lattice(lat, args.probes, seed=args.seed)
            rng = np.random.default_rng(args.seed)
            raw = rng.normal(size=(20_000, 2 * n))
            raw /= np.linalg.norm(raw, axis=1)[:, None]
            radii = (args.domain_radius - r) * rng.random(20_000) ** (1.0 / (2 * n))
            mult = fs.covering_multiplicity(lat, 2.0 * r, raw * radii[:, None])
            print(f"{n:>2} {r:>5.2f} {len(lat):>8} {rep.min_pair_distance:>9.4f} "
                  f"{rep.uncovered_probe_count:>9} {mult:>6} {5 ** (2 * n):>6}")


if __name__ == "__main__":
    main()
