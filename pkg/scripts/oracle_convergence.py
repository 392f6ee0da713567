"""Truncated cross-correlation versus cutoff for smooth and characteristic Gabor windows.

Characteristic windows make the integrands discontinuous, so the truncated
sum only decays like 1/Z; smooth windows with the same supports converge
much faster.

    python scripts/oracle_convergence.py
"""

import argparse
from fractions import Fraction

import numpy as np

from framerange.bands import interval
from framerange.oracle import gabor_cross_correlation, random_sinc_sum
from framerange.profiles import Bump, Characteristic


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    a, b = interval(0, Fraction(1, 3)), interval(Fraction(1, 3), Fraction(2, 3))
    windows = {
        "characteristic": (Characteristic(a, "time"), Characteristic(b, "time")),
        "smooth": (Bump(a, "time"), Bump(b, "time")),
    }
    h1, h2 = random_sinc_sum(rng), random_sinc_sum(rng)
    print(f"{'Z':>4} " + " ".join(f"{k:>15}" for k in windows))
    for Z in (4, 8, 16, 32, 64):
        vals = [abs(gabor_cross_correlation(h1, h2, [f], [g], 1, 1, Z=Z)) for f, g in windows.values()]
        print(f"{Z:>4} " + " ".join(f"{v:>15.2e}" for v in vals))


if __name__ == "__main__":
    main()
