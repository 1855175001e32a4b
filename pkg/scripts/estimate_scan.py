"""Scan Z(y,h)/B(z,h) and |N+(y)| y_n on the bundled orbits, with and without derivative sections."""

import argparse
from fractions import Fraction

from hodge_neron.orbit import estimate_scan, nplus_decay
from hodge_neron.scenario import load_scenario


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("scenarios", nargs="*", default=["example2", "example3"])
    ap.add_argument("--levels", default="10,20,40,80,160")
    args = ap.parse_args()
    levels = tuple(int(t) for t in args.levels.split(","))
    xs = (Fraction(0), Fraction(1, 3), Fraction(2, 3))
    for name in args.scenarios:
        D = load_scenario(name).orbit
        for wd in (True, False):
            rep = estimate_scan(D, None, levels, xs, with_derivatives=wd)
            row = "  ".join(f"{r['y']}:{r['max_ratio']:.4g}" for r in rep.data["levels"])
            print(f"{name:10s} derivatives={str(wd):5s} Z/B  {row}  bounded={rep.ok}")
        npl = nplus_decay(D, levels)
        row = "  ".join(f"{r['y']}:{r['max_product']:.4g}" for r in npl.data["levels"])
        print(f"{name:10s} |N+| y_n                {row}  bounded={npl.ok}")


if __name__ == "__main__":
    main()
