"""Example 2 without derivative sections: integral classes whose limits accumulate on a prescribed point."""

import argparse

from hodge_neron.neron import tz_limit_points, zucker_witness
from hodge_neron.scenario import load_scenario


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--target", default="1/3+1/7*i")
    ap.add_argument("--steps", type=int, default=6)
    ap.add_argument("--height", type=int, default=10)
    args = ap.parse_args()
    D = load_scenario("example2").orbit
    for wd in (True, False):
        la = tz_limit_points(D, (1, 2), wd, args.height)
        print(f"derivative sections={wd}: admissible lattice {la.lattice}, extra bounded classes {len(la.extra)}")
    la = tz_limit_points(D, (1, 2), False, args.height)
    for k, fam in enumerate(la.zucker["families"]):
        print(f"family {k}: h0={fam['h0']} direction={fam['direction']} real rank {fam['real_rank']} "
              f"continuous={fam['continuous']}")
        for h, zeta in zucker_witness(fam, args.target, args.steps, args.height):
            print(f"   h={list(h)}  zeta={zeta}")


if __name__ == "__main__":
    main()
