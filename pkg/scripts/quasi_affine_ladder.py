"""Per-scale periodized supports for quasi-affine systems.

    python scripts/quasi_affine_ladder.py --r-min -5
"""

import argparse

from framerange import SHANNON
from framerange.bands import format_band
from framerange.generators import quasi_affine_report
from framerange.profiles import Characteristic, FourierDual, MeyerBell, haar_time


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r-min", type=int, default=-4)
    args = ap.parse_args()

    W = Characteristic(SHANNON)
    rep = quasi_affine_report([W], 2, 1, [W], 2, 1, r_min=args.r_min, claim="equal")
    print("Shannon wavelet set, dilation 2")
    for r, s in rep.supports().items():
        print(f"  r={r:>3}  {format_band(s)}")

    rep = quasi_affine_report([FourierDual(haar_time())], 2, 1, [MeyerBell()], 2, 1,
                              r_min=args.r_min, claim="equal")
    print(f"Haar vs Meyer, equal-range necessary condition: {rep.status.value}")
    for row in rep.rows:
        print(f"  r={row.r:>3}  {format_band(row.first):<20} {format_band(row.second):<40} "
              f"{'ok' if row.holds('equal') else 'fails'}")


if __name__ == "__main__":
    main()
