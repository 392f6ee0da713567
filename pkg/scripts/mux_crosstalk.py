"""Multiplexing crosstalk versus torus period for a disjoint and an overlapping pair.

    python scripts/mux_crosstalk.py --trials 20
"""

import argparse
from fractions import Fraction

import numpy as np

from framerange import SHANNON, build_model, multiplex_roundtrip
from framerange.bands import interval


def crosstalk(m1, m2, rng, trials, force):
    worst = 0.0
    for _ in range(trials):
        f = rng.normal(size=len(m1.frequencies)) + 1j * rng.normal(size=len(m1.frequencies))
        g = rng.normal(size=len(m2.frequencies)) + 1j * rng.normal(size=len(m2.frequencies))
        worst = max(worst, multiplex_roundtrip(m1, f, m2, g, force=force).crosstalk)
    return worst


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    quarter = interval(Fraction(-1, 4), Fraction(1, 4))
    print(f"{'P':>4} {'disjoint':>10} {'overlapping':>12}")
    for P in (6, 12, 24, 48):
        d = crosstalk(build_model(SHANNON, Fraction(1, 3), P), build_model(quarter, Fraction(1, 2), P),
                      rng, args.trials, False)
        o = crosstalk(build_model(SHANNON, 1, P), build_model(SHANNON, 1, P), rng, args.trials, True)
        print(f"{P:>4} {d:>10.1e} {o:>12.2f}")


if __name__ == "__main__":
    main()
