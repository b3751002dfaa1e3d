"""Property suites behind ``streament verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import FamilySpec, Pmf, exact_entropy, materialize
from .general import general_params, run_general
from .harness import trial_rng
from .oracles import (
    ClassifierModel,
    binom_recip_expectation,
    decompose_entropy,
    exact_estint_probs,
    exact_mean_simple,
    hoeffding_bound,
    plug_in_estimate,
    random_hoeffding_bound,
)
from .simple import run_simple, simple_params
from .stream import RegisterFile, SymbolStream
from .two_interval import est_prob_int, run_two_interval, two_interval_params

SUITES = ("lemmas", "memory", "decomposition", "concentration")


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def _families(k):
    yield FamilySpec("uniform", k)
    yield FamilySpec("zipf", k, s=1.0)
    if k >= 2:
        yield FamilySpec("two-level", k, head_mass=0.7, head_count=1)


def lemmas_suite() -> list[Check]:
    worst = 0.0
    below_cap = True
    for m in range(31):
        for r in np.round(np.arange(0.01, 1.0, 0.01), 2):
            brute = math.fsum(math.comb(m, j) * r**j * (1 - r) ** (m - j) / (j + 1)
                              for j in range(m + 1))
            closed = binom_recip_expectation(m, float(r))
            worst = max(worst, abs(closed - brute))
            below_cap &= closed <= 1 / (r * (m + 1)) + 1e-15
    checks = [Check("binomial reciprocal closed form", worst <= 1e-12 and below_cap,
                    f"max |closed - brute| = {worst:.2e}")]

    failures = []
    for k in range(1, 9):
        for spec in _families(k):
            p = materialize(spec)
            h = exact_entropy(p)
            for N in (2, 8, 32, 64):
                gap = h - exact_mean_simple(p, N)
                if not 0 < gap <= k / N:
                    failures.append((spec.label(), k, N, gap))
    checks.append(Check("exact bias 0 < H - E <= k/N", not failures,
                        f"{len(failures)} violations" + (f": {failures[:3]}" if failures else "")))
    return checks


def memory_suite(seed: int = 0) -> list[Check]:
    checks = []
    for k in (8, 64):
        for spec in _families(k):
            pmf = materialize(spec)
            runs = {
                "simple": lambda s, rf: run_simple(s, simple_params(k, 1.0), rf),
                "two-interval": lambda s, rf: run_two_interval(
                    s, two_interval_params(k, 0.5), rf),
                "general": lambda s, rf: run_general(s, general_params(k, 0.5), rf),
            }
            for name, run in runs.items():
                rf = RegisterFile()
                run(SymbolStream(pmf, trial_rng(seed, k)), rf)
                checks.append(Check(f"{name} {spec.label()} k={k}", rf.high_water <= 20,
                                    f"high water {rf.high_water}"))
    pmf = materialize(FamilySpec("uniform", 64))
    rf = RegisterFile(64 + 4)
    plug_in_estimate(SymbolStream(pmf, trial_rng(seed, 0)), 1000, rf)
    checks.append(Check("plug-in baseline needs > 20 registers at k=64", rf.high_water > 20,
                        f"high water {rf.high_water}"))
    return checks


def random_models(rng: np.random.Generator, count: int):
    """Random (pmf, classifier) pairs for the decomposition identity."""
    for _ in range(count):
        k = int(rng.integers(1, 9))
        probs = rng.dirichlet(np.full(k, 0.7))
        probs = probs / math.fsum(probs)
        labels = int(rng.integers(1, 5))
        cond = rng.dirichlet(np.ones(labels), size=k)
        cond[:, -1] = 1.0 - cond[:, :-1].sum(axis=1)
        cond = np.clip(cond, 0.0, None)
        yield Pmf(tuple(probs)), ClassifierModel(cond)


def decomposition_suite(seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    pairs = list(random_models(rng, 96))
    for probs in ((0.9, 0.1), (0.5, 0.3, 0.2), (0.25, 0.25, 0.25, 0.25)):
        p = Pmf(probs)
        for N in (1, 2):
            pairs.append((p, exact_estint_probs(p, N, 0.5)))
    worst = max(abs(decompose_entropy(p, m).recombined - exact_entropy(p)) for p, m in pairs)
    return [Check(f"entropy decomposition over {len(pairs)} pairs", worst <= 1e-12,
                  f"max error {worst:.2e}")]


def concentration_suite(seed: int = 0, reps: int = 10_000) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = []
    for m in (100, 800):
        for p in (0.1, 0.5, 1.0):
            for t in (0.05, 0.1):
                freq = random_hoeffding_rate(m, p, t, reps, rng)
                bound = random_hoeffding_bound(m, p, t, 0.0, 1.0)
                slack = 4 * math.sqrt(bound * (1 - bound) / reps)
                checks.append(Check(f"random Hoeffding m={m} p={p} t={t}",
                                    freq <= bound + slack,
                                    f"freq {freq:.4f} vs bound {bound:.4f}"))

    # p-hat of the two-interval mass estimator against plain Hoeffding
    pmf = Pmf((0.9, 0.1))
    R, tol, reps_p = 50, 0.15, 1000
    truth = 0.82  # N=1, ell=0.5: sum of p(x)^2
    dev = 0
    for i in range(reps_p):
        s = SymbolStream(pmf, trial_rng(seed, i))
        dev += abs(est_prob_int(s, 1, R, 0.5) - truth) >= tol
    bound = hoeffding_bound(R, [(0, 1)] * R, tol)
    freq = dev / reps_p
    checks.append(Check("mass estimate Hoeffding", freq <= bound + 4 * math.sqrt(
        bound * (1 - bound) / reps_p), f"freq {freq:.4f} vs bound {bound:.4f}"))
    return checks


def random_hoeffding_rate(m: int, p: float, t: float, reps: int,
                          rng: np.random.Generator) -> float:
    """Monte Carlo Pr(|mean - 1/2| >= t/p) for Bin(m, p) fair-coin draws on [0, 1].

    An empty sample (M = 0) counts as a deviation.
    """
    M = rng.binomial(m, p, size=reps)
    heads = rng.binomial(M, 0.5)
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = np.where(M > 0, heads / np.maximum(M, 1), np.nan)
    deviate = (M == 0) | (np.abs(mean - 0.5) >= t / p)
    return float(deviate.mean())


def run_suite(name: str, seed: int = 0) -> list[Check]:
    if name == "lemmas":
        return lemmas_suite()
    if name == "memory":
        return memory_suite(seed)
    if name == "decomposition":
        return decomposition_suite(seed)
    if name == "concentration":
        return concentration_suite(seed)
    raise ValueError(f"unknown suite {name!r}")
