"""Seeded multi-trial runs and their reports."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .distributions import FamilySpec, Pmf, exact_entropy, materialize
from .errors import CapacityExceeded, InvalidParameter
from .general import general_params, run_general
from .oracles import plug_in_estimate
from .simple import run_simple, simple_params
from .stream import DEFAULT_CAPACITY, RegisterFile, SymbolStream
from .two_interval import run_two_interval, two_interval_params

ESTIMATORS = ("simple", "two-interval", "general", "plug-in")
STREAMING_ESTIMATORS = ("simple", "two-interval", "general")
SIG_DIGITS = 12


@dataclass(frozen=True)
class Constants:
    """Tunable constants; defaults are the practical-mode values."""

    beta: float = 2.0
    gamma: float | None = None
    C1: float = 1.0
    C2: float = 1.0
    C_N: float = 1.0
    C_R: float = 1.0
    plug_in_factor: float = 10.0

    def __post_init__(self):
        vals = [self.beta, self.C1, self.C2, self.C_N, self.C_R, self.plug_in_factor]
        if self.gamma is not None:
            vals.append(self.gamma)
        if any(not v > 0 for v in vals):
            raise InvalidParameter("constants must be positive")

    @classmethod
    def tuned(cls) -> "Constants":
        """Doubled window/iteration constants; clears 2/3 success at eps=0.5 with margin."""
        return cls(C1=2.0, C2=2.0, C_N=2.0, C_R=2.0)


@dataclass(frozen=True)
class RunConfig:
    family: FamilySpec
    estimator: str = "simple"
    eps: float = 0.5
    mode: str = "practical"
    constants: Constants = field(default_factory=Constants)
    trials: int = 1
    seed: int = 0
    out: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.estimator not in ESTIMATORS:
            raise InvalidParameter(f"unknown estimator {self.estimator!r}")
        if self.mode not in ("practical", "theory-print"):
            raise InvalidParameter(f"unknown mode {self.mode!r}")
        if not self.eps > 0:
            raise InvalidParameter("eps must be > 0")
        if self.trials < 1:
            raise InvalidParameter("trials must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["family"] = self.family.to_dict()
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        data = dict(data)
        data["family"] = FamilySpec.from_dict(data["family"])
        data["constants"] = Constants(**data.get("constants", {}))
        return cls(**data)


def build_params(estimator: str, k: int, eps: float, c: Constants):
    if estimator == "simple":
        return simple_params(k, eps)
    if estimator == "two-interval":
        return two_interval_params(k, eps, beta=c.beta, gamma=c.gamma, C1=c.C1, C2=c.C2)
    if estimator == "general":
        return general_params(k, eps, beta=c.beta, gamma=c.gamma, C_N=c.C_N, C_R=c.C_R)
    if estimator == "plug-in":
        return math.ceil(c.plug_in_factor * k / eps)
    raise InvalidParameter(f"unknown estimator {estimator!r}")


def predicted_samples(estimator: str, params) -> int:
    if estimator == "simple":
        return params.predicted_samples()
    if estimator == "plug-in":
        return params
    return params.worst_case_samples()


def trial_rng(seed: int, i: int) -> np.random.Generator:
    """Generator for trial ``i``: SeedSequence keyed on (seed, i)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(i,)))


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    estimate: float
    abs_error: float
    samples_consumed: int
    registers_high_water: int
    degenerate_intervals: tuple = ()
    error: str | None = None


def run_one(estimator: str, params, pmf: Pmf, rng, truth: float | None = None,
            trial: int = 0) -> TrialRecord:
    if truth is None:
        truth = exact_entropy(pmf)
    stream = SymbolStream(pmf, rng)
    if estimator == "plug-in":
        rf = RegisterFile(pmf.k + 4)
    else:
        rf = RegisterFile(DEFAULT_CAPACITY)
    degenerate = ()
    try:
        if estimator == "simple":
            est = run_simple(stream, params, rf)
        elif estimator == "plug-in":
            est = plug_in_estimate(stream, params, rf)
        elif estimator == "two-interval":
            res = run_two_interval(stream, params, rf)
            est, degenerate = res.estimate, res.degenerate
        else:
            res = run_general(stream, params, rf)
            est, degenerate = res.estimate, res.degenerate
    except CapacityExceeded as exc:
        return TrialRecord(trial, math.nan, math.inf, stream.consumed, rf.high_water,
                           error=f"capacity-exceeded: {exc}")
    return TrialRecord(trial, est, abs(est - truth), stream.consumed, rf.high_water,
                       tuple(degenerate))


def _run_trial(args):
    estimator, params, pmf, truth, seed, i = args
    return run_one(estimator, params, pmf, trial_rng(seed, i), truth, i)


def run_trials(estimator: str, params, pmf: Pmf, trials: int, seed: int,
               workers: int = 1) -> list[TrialRecord]:
    truth = exact_entropy(pmf)
    jobs = [(estimator, params, pmf, truth, seed, i) for i in range(trials)]
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_trial, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        records = [_run_trial(j) for j in jobs]
    return sorted(records, key=lambda r: r.trial)


def monte_carlo_success(estimator: str, pmf: Pmf, eps: float, trials: int, seed: int,
                        constants: Constants = Constants(), workers: int = 1) -> float:
    """Fraction of seeded trials landing within ``eps`` of the true entropy."""
    params = build_params(estimator, pmf.k, eps, constants)
    records = run_trials(estimator, params, pmf, trials, seed, workers)
    return sum(r.abs_error <= eps for r in records) / trials


def _round(v):
    if isinstance(v, float):
        if not math.isfinite(v):
            return None if math.isnan(v) else ("inf" if v > 0 else "-inf")
        return float(f"{v:.{SIG_DIGITS}g}")
    if isinstance(v, dict):
        return {key: _round(val) for key, val in v.items()}
    if isinstance(v, (list, tuple)):
        return [_round(val) for val in v]
    return v


@dataclass
class RunReport:
    config: dict
    true_entropy: float
    predicted_worst_case_samples: int
    trials: list
    aggregates: dict
    units: str = "nats"

    FIELDS = ("config", "units", "true_entropy", "predicted_worst_case_samples",
              "aggregates", "trials")
    TRIAL_FIELDS = ("trial", "estimate", "abs_error", "samples_consumed",
                    "registers_high_water", "degenerate_intervals", "error")
    AGGREGATE_FIELDS = ("success_rate", "mean_abs_error", "p90_abs_error",
                        "mean_samples", "max_registers", "failed_trials")

    def to_dict(self) -> dict:
        return _round({name: getattr(self, name) for name in self.FIELDS})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        data = json.loads(text)
        missing = set(cls.FIELDS) - set(data)
        if missing:
            raise ValueError(f"report missing fields: {sorted(missing)}")
        for rec in data["trials"]:
            if set(rec) != set(cls.TRIAL_FIELDS):
                raise ValueError("trial record fields do not match the schema")
        if set(data["aggregates"]) != set(cls.AGGREGATE_FIELDS):
            raise ValueError("aggregate fields do not match the schema")
        return cls(**data)


def aggregate(records: list[TrialRecord], eps: float) -> dict:
    errors = np.array([r.abs_error for r in records], dtype=float)
    ok = [r for r in records if r.error is None]
    finite = errors[np.isfinite(errors)]
    return {
        "success_rate": sum(r.abs_error <= eps for r in records) / len(records),
        "mean_abs_error": float(finite.mean()) if len(finite) else math.nan,
        "p90_abs_error": float(np.quantile(errors, 0.9, method="higher")),
        "mean_samples": float(np.mean([r.samples_consumed for r in records])),
        "max_registers": max(r.registers_high_water for r in records),
        "failed_trials": len(records) - len(ok),
    }


def run_config(config: RunConfig) -> RunReport:
    pmf = materialize(config.family)
    params = build_params(config.estimator, pmf.k, config.eps, config.constants)
    records = run_trials(config.estimator, params, pmf, config.trials, config.seed,
                         config.workers)
    cfg = config.to_dict()
    cfg.pop("workers")
    cfg.pop("out")
    return RunReport(
        config=cfg,
        true_entropy=exact_entropy(pmf),
        predicted_worst_case_samples=predicted_samples(config.estimator, params),
        trials=[asdict(r) for r in records],
        aggregates=aggregate(records, config.eps),
    )


SWEEP_COLUMNS = ("k", "eps", "estimator", "family", "trials", "true_entropy",
                 "success_rate", "mean_abs_error", "p90_abs_error", "mean_samples",
                 "max_registers", "predicted_worst_case_samples", "error")


def sweep_rows(base: RunConfig, ks, epss, estimators):
    for k in ks:
        for eps in epss:
            for est in estimators:
                row = dict.fromkeys(SWEEP_COLUMNS, "")
                row.update(k=k, eps=eps, estimator=est, trials=base.trials)
                try:
                    fam = replace(base.family, k=k)
                    row["family"] = fam.label()
                    report = run_config(replace(base, family=fam, eps=eps, estimator=est))
                    row["true_entropy"] = report.true_entropy
                    row["predicted_worst_case_samples"] = report.predicted_worst_case_samples
                    row.update({key: report.aggregates[key] for key in
                                ("success_rate", "mean_abs_error", "p90_abs_error",
                                 "mean_samples", "max_registers")})
                except Exception as exc:  # recorded per row, sweep continues
                    row["error"] = f"{type(exc).__name__}: {exc}"
                yield _round(row)


def write_sweep_csv(rows, fh=None) -> str:
    buf = fh if fh is not None else io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue() if fh is None else ""
