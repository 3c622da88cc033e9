"""Entanglement between particles 1 and 3 seen from particle 2, as |alpha|^2 varies.

Writes CSV to stdout: p, frame1_entropy, frame2_entropy, binary_entropy.
"""

import argparse
import csv
import math
import sys

import numpy as np

from qrframes.translation import three_particle_report


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=16)
    ap.add_argument("--positions", default="0,2,7;0,5,7", help="two branches of three positions")
    ap.add_argument("--steps", type=int, default=11)
    args = ap.parse_args()
    pos = [[int(x) for x in b.split(",")] for b in args.positions.split(";")]

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["p", "frame1_entropy", "frame2_entropy", "binary_entropy"])
    for p in np.linspace(0, 1, args.steps):
        rep = three_particle_report(args.n, pos, math.sqrt(p), math.sqrt(1 - p))
        f1, f2 = rep["frames"]
        h = max(0.0, -sum(x * math.log2(x) for x in (p, 1 - p) if x > 0))
        w.writerow([f"{p:.3f}", f"{f1['entropy_bits']['2|3']:.6f}", f"{f2['entropy_bits']['1|3']:.6f}", f"{h:.6f}"])


if __name__ == "__main__":
    main()
