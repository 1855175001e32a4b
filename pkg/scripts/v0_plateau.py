"""max |v0(y)| over dyadic grids on the mixed scenarios, for a few values of lambda."""

import argparse

from hodge_neron.normal_function import v0_lift, v0_plateau
from hodge_neron.scenario import load_scenario


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lambdas", default="0,1,-1/2")
    ap.add_argument("--kmax", type=int, default=10)
    args = ap.parse_args()
    for name in ("example3", "torsion"):
        for lam in args.lambdas.split(","):
            X = load_scenario(name, lam=lam).mixed
            res = v0_plateau(X, tuple(range(1, args.kmax + 1)))
            lv = "  ".join(f"{k}:{v:.4g}" for k, v in res["levels"].items())
            print(f"{name:9s} lambda={lam:5s} v0(3,1)={[str(a) for a in v0_lift(X, (3, 1))]}  {lv}  "
                  f"bounded={res['bounded']}")


if __name__ == "__main__":
    main()
