"""Register high-water of each estimator as the alphabet grows.

The constant-space estimators stay flat; the plug-in baseline grows like k.

    python3 scripts/memory_contrast.py --k 8,64,256,1000
"""

import argparse

from streament.distributions import FamilySpec, materialize
from streament.harness import Constants, build_params, run_one, trial_rng


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", default="8,64,256,1000")
    ap.add_argument("--eps", type=float, default=1.0)
    ap.add_argument("--family", default="zipf:1")
    args = ap.parse_args(argv)

    ests = ("simple", "two-interval", "general", "plug-in")
    print(f"{'k':>6} " + " ".join(f"{e:>13}" for e in ests))
    for k in (int(v) for v in args.k.split(",")):
        pmf = materialize(FamilySpec.parse(args.family, k))
        cells = []
        for est in ests:
            try:
                params = build_params(est, k, args.eps, Constants())
            except ValueError:
                cells.append("n/a")
                continue
            cells.append(str(run_one(est, params, pmf, trial_rng(0, 0)).registers_high_water))
        print(f"{k:>6} " + " ".join(f"{c:>13}" for c in cells))


if __name__ == "__main__":
    main()
