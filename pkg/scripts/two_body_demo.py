"""Probe particle and massive object: change from the probe's frame to the mass's frame.

    python3 scripts/two_body_demo.py --n 16 --a 3 --p 0.5
"""

import argparse
import math

from qrframes.models import counter
from qrframes.states import frame_factorizes
from qrframes.translation import TranslationScenario, build_earth_particle, relative_distance, to_mass_frame


def show(title, st, n):
    print(title)
    for amp, m in st.branches:
        print(f"  {amp.real:+.4f}{amp.imag:+.4f}j  P={m[0]:>3}  M={m[1]:>3}  d_MP={relative_distance(m, 1, 0, n):+d}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=16)
    ap.add_argument("--a", type=int, default=3)
    ap.add_argument("--p", type=float, default=0.5, help="|alpha|^2")
    args = ap.parse_args()

    sc = TranslationScenario(args.n, args.a, math.sqrt(args.p), math.sqrt(1 - args.p))
    psi_p = build_earth_particle(sc)
    psi_m = to_mass_frame(psi_p, sc)
    show("relative to P:", psi_p, sc.n)
    show("relative to M:", psi_m, sc.n)
    print(f"P definite relative to P: {frame_factorizes(psi_p, 0)}, M definite relative to P: {frame_factorizes(psi_p, 1)}")
    print(f"M definite relative to M: {frame_factorizes(psi_m, 1)}, P definite relative to M: {frame_factorizes(psi_m, 0)}")
    if len(psi_m) == 2:
        m1, m2 = psi_m.models
        print(f"counterpart element between branches: P section {counter(sc.probe_frame(), m1, m2).label}, "
              f"M section {counter(sc.mass_frame(), m1, m2).label}")


if __name__ == "__main__":
    main()
