"""Exact small-instance oracles and concentration bounds.

Everything here is deterministic and enumerates binomial laws directly, so
the estimators can be checked against closed-form expectations rather than
against other Monte Carlo runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .distributions import Pmf
from .errors import DomainError, InstanceTooLarge, InvalidParameter
from .stream import RegisterFile, SymbolStream

MAX_TERMS = 10**6


def binom_pmf(n: int, r: float) -> list[float]:
    """Bin(n, r) probabilities for c = 0..n via log-factorials."""
    if r <= 0.0:
        return [1.0] + [0.0] * n
    if r >= 1.0:
        return [0.0] * n + [1.0]
    lr, lq = math.log(r), math.log1p(-r)
    lgn = math.lgamma(n + 1)
    return [math.exp(lgn - math.lgamma(c + 1) - math.lgamma(n - c + 1) + c * lr + (n - c) * lq)
            for c in range(n + 1)]


def binom_recip_expectation(m: int, r: float) -> float:
    """E[1/(X+1)] for X ~ Bin(m, r), i.e. (1 - (1-r)^(m+1)) / (r(m+1)).

    At r = 0 the closed form is 0/0; the limit (X = 0 surely) is 1.
    """
    if m < 0:
        raise DomainError("m must be >= 0")
    if not 0 <= r <= 1:
        raise DomainError("r must lie in [0, 1]")
    if r == 0:
        return 1.0
    return -math.expm1((m + 1) * math.log1p(-r)) / (r * (m + 1)) if r < 1 else 1.0 / (m + 1)


def exact_mean_simple(p: Pmf, N: int) -> float:
    """E[single-interval estimate] = sum_x p(x) E[ln(N/(Bin(N,p(x))+1))]."""
    if p.k * (N + 1) > MAX_TERMS:
        raise InstanceTooLarge(f"k*N = {p.k * N} exceeds the enumeration guard")
    logs = [math.log(N / (c + 1)) for c in range(N + 1)]
    terms = []
    for px in p.probs:
        if px == 0:
            continue
        for c, w in enumerate(binom_pmf(N, px)):
            terms.append(px * w * logs[c])
    return math.fsum(terms)


def _upper_tail(n: int, r: float, threshold: float) -> float:
    """Pr[Bin(n, r) >= threshold], threshold compared as a real number."""
    pmf = binom_pmf(n, r)
    return min(1.0, math.fsum(w for c, w in enumerate(pmf) if c >= threshold))


@dataclass(frozen=True)
class ClassifierModel:
    """``cond[x, j]`` = probability the classifier sends symbol x to interval j+1."""

    cond: np.ndarray

    def __post_init__(self):
        cond = np.asarray(self.cond, dtype=float)
        if cond.ndim != 2:
            raise InvalidParameter("classifier table must be 2-D (symbols x intervals)")
        if np.any(cond < 0) or np.any(np.abs(cond.sum(axis=1) - 1.0) > 1e-12):
            raise InvalidParameter("each row must be a distribution over intervals")
        object.__setattr__(self, "cond", cond)

    @property
    def n_intervals(self) -> int:
        return self.cond.shape[1]

    def masses(self, p: Pmf) -> list[float]:
        """Marginal probability of each interval label under X ~ p."""
        return [math.fsum(p.probs[x] * self.cond[x, j] for x in range(p.k))
                for j in range(self.n_intervals)]


def exact_genestint_probs(p: Pmf, thresholds: Sequence[float],
                          windows: Sequence[int]) -> ClassifierModel:
    """Exact label law of the staged classifier.

    Stage i draws ``windows[i]`` samples and fires when the count reaches
    ``windows[i] * thresholds[i]``; if no stage fires the last label wins.
    """
    if len(thresholds) != len(windows):
        raise InvalidParameter("need one window per threshold")
    if p.k * sum(n + 1 for n in windows) > MAX_TERMS:
        raise InstanceTooLarge("classifier enumeration too large")
    stages = len(thresholds)
    cond = np.zeros((p.k, stages + 1))
    for x, px in enumerate(p.probs):
        survive = 1.0
        for i, (ell, n) in enumerate(zip(thresholds, windows)):
            fire = _upper_tail(n, px, n * ell)
            cond[x, i] = survive * fire
            survive *= 1.0 - fire
        cond[x, stages] = 1.0 - math.fsum(cond[x, :stages])
    return ClassifierModel(cond)


def exact_estint_probs(p: Pmf, N: int, ell: float) -> ClassifierModel:
    return exact_genestint_probs(p, (ell,), (N,))


@dataclass(frozen=True)
class Decomposition:
    per_interval: tuple
    masses: tuple
    recombined: float


def decompose_entropy(p: Pmf, model: ClassifierModel) -> Decomposition:
    """Per-label conditional entropies H_j and the masses that reweight them.

    Labels that never occur get ``H_j = nan`` and weight 0.
    """
    if model.cond.shape[0] != p.k:
        raise InvalidParameter("classifier table does not match the alphabet")
    masses = model.masses(p)
    per = []
    weighted = []
    for j, mass in enumerate(masses):
        if mass == 0:
            per.append(math.nan)
            continue
        h = math.fsum(p.probs[x] * model.cond[x, j] / mass * -math.log(p.probs[x])
                      for x in range(p.k) if p.probs[x] > 0)
        per.append(h)
        weighted.append(mass * h)
    return Decomposition(per_interval=tuple(per), masses=tuple(masses),
                         recombined=math.fsum(weighted))


def hoeffding_bound(m: int, ranges: Sequence[tuple], t: float) -> float:
    """Two-sided tail for the mean of m independent bounded variables."""
    if m < 1:
        raise InvalidParameter("m must be >= 1")
    if len(ranges) != m:
        raise InvalidParameter("need one (a, b) range per variable")
    spread = math.fsum((b - a) ** 2 for a, b in ranges)
    if any(b < a for a, b in ranges):
        raise InvalidParameter("ranges need b >= a")
    if spread == 0:
        return 1.0 if t <= 0 else 0.0
    return min(1.0, 2.0 * math.exp(-2.0 * (m * t) ** 2 / spread))


def random_hoeffding_bound(m: int, p: float, t: float, a: float, b: float) -> float:
    """Tail ``Pr(|X - EX| >= t/p)`` when X averages Bin(m, p) bounded draws."""
    if m < 1 or not 0 < p <= 1 or not b > a:
        raise InvalidParameter("need m >= 1, 0 < p <= 1 and b > a")
    return min(1.0, 3.0 * math.exp(-m * t**2 / (8.0 * p * (b - a) ** 2)))


def plug_in_estimate(stream: SymbolStream, n: int, rf: RegisterFile | None = None) -> float:
    """Entropy of the empirical distribution of ``n`` draws.

    Holds one count register per symbol, so it needs a register file sized
    for the alphabet (the default is ``k + 4``).
    """
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    k = stream.pmf.k
    if rf is None:
        rf = RegisterFile(k + 4)
    counts = np.bincount(stream.take(n), minlength=k)
    with rf.registers(k) as cells, rf.registers(2) as (total, sym):
        for x, c in enumerate(counts):
            rf[cells[x]] = int(c)
        rf[total] = 0.0
        for x in range(k):
            rf[sym] = x
            c = rf[cells[x]]
            if c:
                rf[total] += -(c / n) * math.log(c / n)
        return rf[total]
