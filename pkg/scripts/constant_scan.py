"""Practical-mode success rate against the window/iteration multiplier C.

Scales C1 = C2 = C_N = C_R together and reports the success rate of the
two-interval and general estimators at beta = 2.  This is the run that picked
C = 2 as the tuned preset.

    python3 scripts/constant_scan.py --k 64,1000 --c 1,2,4 --trials 100
"""

import argparse
import csv
import sys
import time

from streament.distributions import FamilySpec, materialize
from streament.harness import Constants, monte_carlo_success


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", default="64,1000")
    ap.add_argument("--c", default="1,2,4")
    ap.add_argument("--eps", type=float, default=0.5)
    ap.add_argument("--families", default="uniform,zipf:1,two-level:0.5:4")
    ap.add_argument("--estimators", default="two-interval,general")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    writer = csv.writer(sys.stdout)
    writer.writerow(["C", "estimator", "k", "family", "success_rate", "seconds_per_trial"])
    for c in (float(v) for v in args.c.split(",")):
        consts = Constants(C1=c, C2=c, C_N=c, C_R=c)
        for est in args.estimators.split(","):
            for k in (int(v) for v in args.k.split(",")):
                for fam in args.families.split(","):
                    pmf = materialize(FamilySpec.parse(fam, k))
                    t0 = time.perf_counter()
                    rate = monte_carlo_success(est, pmf, args.eps, args.trials, args.seed,
                                               consts, args.workers)
                    dt = (time.perf_counter() - t0) / args.trials
                    writer.writerow([c, est, k, fam, f"{rate:.3f}", f"{dt:.4f}"])
                    sys.stdout.flush()


if __name__ == "__main__":
    main()
