#!/usr/bin/env python3
"""Census of the pointwise convergence diagnosis across the gallery.

For each filter, diagnoses a batch of uniformly drawn points and counts
verdict combinations, flagging any pair that would contradict the
product/harmonic equivalence.

Usage:
    python scripts/convergence_census.py [--points 50] [--max-n 30] [--seed 42]
"""

import argparse
from collections import Counter

import numpy as np

import wavewalk as ww


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=50)
    ap.add_argument("--max-n", type=int, default=30, dest="max_n")
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    policy = ww.TruncationPolicy(tail_cutoff_k=1000)
    rng = np.random.Generator(np.random.Philox(key=np.uint64(args.seed)))
    contradictions = 0
    for name in ww.GALLERY_NAMES:
        spec = ww.load_gallery(name)
        system = ww.PathSystem(spec.scale_n)
        tally = Counter()
        for _ in range(args.points):
            rep = ww.diagnose_convergence(spec, system, float(rng.random()), args.max_n, policy)
            if rep.hypothesis != "met":
                tally[f"hypothesis-{rep.hypothesis}"] += 1
                continue
            tally[f"{rep.product_verdict}/{rep.harmonic_verdict}"] += 1
            if not rep.consistent:
                contradictions += 1
        counts = ", ".join(f"{k}: {v}" for k, v in sorted(tally.items()))
        print(f"{name:16s} {counts}")
    print(f"contradictions of the equivalence: {contradictions}")


if __name__ == "__main__":
    main()
