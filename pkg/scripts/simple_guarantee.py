"""Success rate and mean error of the simple estimator as eps shrinks.

    python3 scripts/simple_guarantee.py --k 8 --eps 1,0.5,0.25 --trials 200
"""

import argparse
import csv
import sys

from streament.distributions import FamilySpec
from streament.harness import RunConfig, run_config


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=8)
    ap.add_argument("--eps", default="1,0.5,0.25")
    ap.add_argument("--families", default="uniform,zipf:1,two-level:0.5:2")
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    writer = csv.writer(sys.stdout)
    writer.writerow(["family", "k", "eps", "success_rate", "mean_abs_error", "samples_per_trial"])
    for fam in args.families.split(","):
        for eps in (float(e) for e in args.eps.split(",")):
            cfg = RunConfig(family=FamilySpec.parse(fam, args.k), estimator="simple", eps=eps,
                            trials=args.trials, seed=args.seed, workers=args.workers)
            agg = run_config(cfg).aggregates
            writer.writerow([fam, args.k, eps, f"{agg['success_rate']:.3f}",
                             f"{agg['mean_abs_error']:.4f}", int(agg["mean_samples"])])


if __name__ == "__main__":
    main()
