"""Sweep sampling steps for the Shannon wavelet set and tabulate the multiplicity.

    python scripts/shannon_sampling_map.py --max-denominator 12
"""

import argparse
from fractions import Fraction

from framerange import SHANNON, frame_bounds_exact, multiplicity
from framerange.bands import format_band


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-denominator", type=int, default=10)
    ap.add_argument("--max-step", type=Fraction, default=Fraction(5, 4))
    args = ap.parse_args()

    steps = sorted({Fraction(p, q) for q in range(1, args.max_denominator + 1)
                    for p in range(1, int(args.max_step * q) + 1)})
    print(f"{'A':>6} {'max m':>5} {'sampling':>8} {'C1':>6} {'C2':>6}  support of m")
    for a in steps:
        m = multiplicity(SHANNON, a)
        c1, c2 = frame_bounds_exact(SHANNON, a)
        print(f"{str(a):>6} {str(m.max()):>5} {str(m.max() <= 1):>8} {str(c1):>6} {str(c2):>6}  "
              f"{format_band(m.support())}")


if __name__ == "__main__":
    main()
