"""Command-line front end: ``params``, ``estimate``, ``verify`` and ``sweep``.

Exit codes: 0 success, 1 a verification suite failed, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .distributions import FamilySpec
from .errors import InvalidParameter, NormalizationError, VacuousPartition
from .general import theory_constant_check
from .harness import (
    ESTIMATORS,
    Constants,
    RunConfig,
    build_params,
    predicted_samples,
    run_config,
    sweep_rows,
    write_sweep_csv,
)
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

CONSTANT_FLAGS = {"beta": "beta", "gamma": "gamma", "c1": "C1", "c2": "C2",
                  "cn": "C_N", "cr": "C_R"}


class ConfigError(Exception):
    pass


def load_config_file(path: str) -> dict:
    text = Path(path).read_text()
    if path.endswith((".yaml", ".yml")):
        import yaml
        return yaml.safe_load(text) or {}
    return json.loads(text)


def resolve_config(args) -> RunConfig:
    """Merge config-file values with CLI flags; flags win."""
    data = load_config_file(args.config) if getattr(args, "config", None) else {}
    consts = dict(data.get("constants", {}))
    if getattr(args, "preset", None) == "tuned":
        base = Constants.tuned()
        consts = {**{f: getattr(base, f) for f in ("C1", "C2", "C_N", "C_R")}, **consts}
    for flag, field in CONSTANT_FLAGS.items():
        val = getattr(args, flag, None)
        if val is not None:
            consts[field] = val

    k = args.k if getattr(args, "k", None) is not None else data.get("k")
    family = data.get("family", "uniform")
    if getattr(args, "family", None):
        family = args.family
    if isinstance(family, dict):
        fam = FamilySpec.from_dict({**family, **({"k": k} if k is not None else {})})
    else:
        fam = FamilySpec.parse(family, k)

    def pick(name, default):
        val = getattr(args, name, None)
        return val if val is not None else data.get(name, default)

    return RunConfig(
        family=fam,
        estimator=pick("estimator", "simple"),
        eps=float(pick("eps", 0.5)),
        mode=pick("mode", "practical"),
        constants=Constants(**consts),
        trials=int(pick("trials", 1)),
        seed=int(pick("seed", 0)),
        out=pick("out", None),
        workers=int(pick("workers", 1)),
    )


def _fmt(v, units="nats"):
    if units == "bits" and isinstance(v, float):
        v = v / math.log(2)
    return f"{v:.12g}" if isinstance(v, float) else str(v)


def cmd_params(args) -> int:
    if args.k is None:
        raise ConfigError("--k is required")
    est = args.estimator or "simple"
    c = resolve_config(args).constants
    try:
        params = build_params(est, args.k, args.eps, c)
    except VacuousPartition as exc:
        print(f"error: {exc}\nhint: lower --beta so every boundary stays below 1",
              file=sys.stderr)
        return EXIT_CONFIG
    print(f"estimator: {est}   k={args.k}   eps={args.eps:g}")
    if est == "simple":
        print(f"N = {params.N}\nR = {params.R}")
    elif est == "two-interval":
        print(f"ell = {params.ell:.12g}   beta = {params.beta:g}   gamma = {params.gamma:g}")
        print(f"N = {params.N}   R = {params.R}")
        print(f"N1 = {params.N1}   R1 = {params.R1}")
        print(f"N2 = {params.N2}   R2 = {params.R2}")
    elif est == "general":
        part = params.partition
        print(f"T = {part.T}   beta = {params.beta:g}   gamma = {params.gamma:g}")
        print("boundaries h = (" + ", ".join(f"{v:.12g}" for v in part.h) + ")")
        for i in range(1, part.T + 1):
            print(f"  I_{i} = [{part.lower(i):.6g}, {part.upper(i):.6g})   "
                  f"N_{i} = {params.N[i - 1]}   R_{i} = {params.R[i - 1]}")
    else:
        print(f"n = {params}")
    print(f"predicted worst-case samples = {predicted_samples(est, params)}")

    if (args.mode or "practical") == "theory-print":
        gamma = c.gamma if c.gamma is not None else c.beta / 2
        print("\ntheory constant check (C_T = %g):" % args.ct)
        for chk in theory_constant_check(c.beta, gamma, c.C_N, c.C_R, args.ct):
            status = "PASS" if chk.passed else "FAIL"
            print(f"  [{status}] {chk.name}: value {chk.value:.6g}, threshold {chk.threshold:.6g}")
        if c.beta <= 16:
            print("  (beta <= 16: practical mode, formal constants not inherited)")
    return EXIT_OK


def cmd_estimate(args) -> int:
    config = resolve_config(args)
    report = run_config(config)
    text = report.to_json()
    if config.out:
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)
    agg = report.aggregates
    print(f"true entropy {_fmt(report.true_entropy, args.units)} {args.units}; "
          f"success rate {agg['success_rate']:.4g}; mean |error| "
          f"{_fmt(agg['mean_abs_error'], args.units)} {args.units}; "
          f"max registers {agg['max_registers']}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_suite(args.suite, args.seed or 0)
    for chk in checks:
        print(f"[{'PASS' if chk.passed else 'FAIL'}] {chk.name}: {chk.detail}")
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def _split(text, cast):
    return [cast(v) for v in str(text).split(",") if v.strip()]


def cmd_sweep(args) -> int:
    if args.k is None:
        raise ConfigError("--k is required")
    ks = _split(args.k, int)
    epss = _split(args.eps_list, float)
    ests = _split(args.estimator or "simple", str)
    for e in ests:
        if e not in ESTIMATORS:
            raise ConfigError(f"unknown estimator {e!r}")
    if not (ks and epss and ests):
        raise ConfigError("sweep grid is empty")
    base = resolve_config(replace_ns(args, k=ks[0], eps=epss[0], estimator=ests[0]))
    rows = sweep_rows(base, ks, epss, ests)
    if base.out:
        with open(base.out, "w", newline="") as fh:
            write_sweep_csv(rows, fh)
    else:
        sys.stdout.write(write_sweep_csv(rows))
    return EXIT_OK


def replace_ns(ns, **kw):
    out = argparse.Namespace(**vars(ns))
    for key, val in kw.items():
        setattr(out, key, val)
    return out


def _common(p, estimator_default=None):
    p.add_argument("--config", help="JSON or YAML file mirroring RunConfig")
    p.add_argument("--family", help="uniform | dirac | zipf:S | geometric:R | "
                                    "two-level:MASS:COUNT | custom:p0,p1,...")
    p.add_argument("--estimator", default=estimator_default)
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--c1", type=float)
    p.add_argument("--c2", type=float)
    p.add_argument("--cn", type=float)
    p.add_argument("--cr", type=float)
    p.add_argument("--preset", choices=("default", "tuned"))
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=("practical", "theory-print"))
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.add_argument("--units", choices=("nats", "bits"), default="nats")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="streament",
                                     description="Constant-space streaming entropy estimation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="print window/iteration parameters")
    _common(p, "simple")
    p.add_argument("--k", type=int)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--ct", type=float, default=30.0, help="C_T for the theory check")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("estimate", help="run seeded trials and write a JSON report")
    _common(p)
    p.add_argument("--k", type=int)
    p.add_argument("--eps", type=float)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="grid of runs written as CSV")
    _common(p)
    p.add_argument("--k", help="comma-separated alphabet sizes")
    p.add_argument("--eps", dest="eps_list", default="0.5",
                   help="comma-separated accuracy targets")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InvalidParameter, NormalizationError, VacuousPartition,
            OSError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
