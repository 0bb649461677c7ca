#!/usr/bin/env python3
"""Stationary (Ruelle) cell masses of the gallery walks.

Runs the adjoint grid iteration for each bundled filter, reports the
fixed-point residual and where the mass ends up.  For the plain Haar
walk the mass collapses onto the cells touching 0 mod 1; the stretched
filter keeps a second recurrent class on the cycle {1/3, 2/3}.

Usage:
    python scripts/stationary_measures.py [--grid-level 8] [--iters 300]
"""

import argparse

import numpy as np

import wavewalk as ww


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid-level", type=int, default=8)
    ap.add_argument("--iters", type=int, default=300)
    args = ap.parse_args()

    for name in ww.GALLERY_NAMES:
        spec = ww.load_gallery(name)
        system = ww.PathSystem(spec.scale_n)
        masses, residual = ww.ruelle_measure(spec, system, args.grid_level, args.iters)
        v = masses.values
        cells = len(v)
        top = np.argsort(v)[-4:][::-1]
        near_zero = float(v[: cells // 16].sum() + v[-cells // 16 :].sum())
        tops = ", ".join(f"{m}/{cells}: {v[m]:.4f}" for m in top if v[m] > 1e-6)
        print(f"{name:16s} residual {residual:.2e}  near-0 band {near_zero:.4f}  top cells {tops}")


if __name__ == "__main__":
    main()
