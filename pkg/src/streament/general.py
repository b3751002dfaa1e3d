"""Iterated-log interval estimator.

The probability axis is cut at ``(ln^(i) k)^beta / k`` for i = 1..T-1 with
T = log* k, so the bottom interval sits below e^beta/k.  Each interval gets
its own window and iteration budget; per-interval results are folded into a
running sum so memory stays constant in T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ._loops import conditional_loop, mass_loop
from .errors import DomainError, InvalidParameter, VacuousPartition
from .stream import RegisterFile, SymbolStream
from .two_interval import clip_floor


def iterlog(k: float, i: int) -> float:
    """``i``-fold natural log of ``k``; ``iterlog(k, 0) == k``."""
    if i < 0:
        raise DomainError("iteration count must be >= 0")
    v = float(k)
    for _ in range(i):
        if v <= 0:
            raise DomainError(f"iterated log of {k!r} left the positive reals")
        v = math.log(v)
    return v


def log_star(k: float) -> int:
    """Smallest i with ``iterlog(k, i) <= 1``."""
    if k < 1:
        raise DomainError("log* needs k >= 1")
    i, v = 0, float(k)
    while v > 1:
        v = math.log(v)
        i += 1
    return i


@dataclass(frozen=True)
class IntervalPartition:
    """Boundaries ``h[0] = 1 > h[1] > ... > h[T] = 0``; I_i = [h[i], h[i-1])."""

    k: float
    beta: float
    T: int
    h: tuple

    def __post_init__(self):
        h = self.h
        if len(h) != self.T + 1 or h[0] != 1.0 or h[-1] != 0.0:
            raise VacuousPartition("boundaries must run from 1 down to 0 with T+1 entries")
        if any(a <= b for a, b in zip(h, h[1:])):
            raise VacuousPartition(
                f"boundaries {h} are not strictly decreasing; lower beta")

    def lower(self, i: int) -> float:
        return self.h[i]

    def upper(self, i: int) -> float:
        return self.h[i - 1]

    @classmethod
    def from_thresholds(cls, thresholds: Sequence[float], k: float = math.nan,
                        beta: float = math.nan) -> "IntervalPartition":
        h = (1.0, *map(float, thresholds), 0.0)
        return cls(k=k, beta=beta, T=len(h) - 1, h=h)


def build_partition(k: float, beta: float) -> IntervalPartition:
    if beta <= 0:
        raise InvalidParameter("beta must be positive")
    T = max(1, log_star(k))
    interior = tuple(iterlog(k, i) ** beta / k for i in range(1, T))
    if any(b >= 1 for b in interior):
        raise VacuousPartition(
            f"beta={beta:g} puts a boundary at or above 1 for k={k:g}; lower beta")
    return IntervalPartition(k=k, beta=beta, T=T, h=(1.0, *interior, 0.0))


@dataclass(frozen=True)
class GeneralParams:
    k: int
    eps: float
    beta: float
    gamma: float
    partition: IntervalPartition
    N: tuple
    R: tuple
    C_N: float = 1.0
    C_R: float = 1.0

    @property
    def T(self) -> int:
        return self.partition.T

    def classifier_depth(self, i: int) -> int:
        """How many classifier stages run when targeting interval ``i``."""
        return min(i, self.T - 1)

    def worst_case_samples(self) -> int:
        total = 0
        for i in range(1, self.T + 1):
            stages = sum(self.N[:self.classifier_depth(i)])
            if i < self.T:
                total += self.R[i - 1] * (1 + stages)
            total += self.R[i - 1] * (1 + stages + self.N[i - 1])
        return total


def general_params(k: int, eps: float, beta: float = 2.0, gamma: float | None = None,
                   C_N: float = 1.0, C_R: float = 1.0,
                   partition: IntervalPartition | None = None) -> GeneralParams:
    if k < 1:
        raise InvalidParameter("k must be >= 1")
    if not eps > 0:
        raise InvalidParameter("eps must be > 0")
    if C_N <= 0 or C_R <= 0:
        raise InvalidParameter("C_N and C_R must be positive")
    if gamma is None:
        gamma = beta / 2
    if partition is None:
        partition = build_partition(k, beta)
    T = partition.T
    N = [math.ceil(C_N * k / (eps * iterlog(k, i) ** gamma)) for i in range(1, T)]
    N.append(math.ceil(C_N * k / eps))
    R = [max(1, math.ceil(C_R * math.log(iterlog(k, i - 1) / eps) ** 2 / eps**2))
         for i in range(1, T + 1)]
    return GeneralParams(k=k, eps=eps, beta=beta, gamma=gamma, partition=partition,
                         N=tuple(N), R=tuple(R), C_N=C_N, C_R=C_R)


def gen_est_int(stream: SymbolStream, x: int, partition: IntervalPartition,
                N: Sequence[int], up_to: int, rf: RegisterFile | None = None) -> int:
    """Run classifier stages 1..up_to; first stage that fires names the interval.

    Falls through to ``up_to + 1`` (which is T for the full classifier).
    """
    if up_to > partition.T - 1:
        raise InvalidParameter("up_to must be <= T-1")
    if rf is None:
        for i in range(1, up_to + 1):
            if stream.count_in_window(x, N[i - 1]) >= N[i - 1] * partition.lower(i):
                return i
        return up_to + 1
    with rf.registers(1) as (i,):
        rf[i] = 1
        while rf[i] <= up_to:
            n_i = N[rf[i] - 1]
            if stream.count_in_window(x, n_i, rf) >= n_i * partition.lower(rf[i]):
                return rf[i]
            rf[i] += 1
        return up_to + 1


def _prob_one(stream, params: GeneralParams, i: int, rf: RegisterFile) -> float:
    depth = params.classifier_depth(i)
    hits = mass_loop(
        stream,
        lambda x: gen_est_int(stream, x, params.partition, params.N, depth, rf) == i,
        params.R[i - 1], rf)
    return hits / params.R[i - 1]


def _cond_one(stream, params: GeneralParams, i: int, rf: RegisterFile,
              trace: list | None = None) -> tuple[float, int]:
    depth = params.classifier_depth(i)
    return conditional_loop(
        stream,
        lambda x: gen_est_int(stream, x, params.partition, params.N, depth, rf) == i,
        params.N[i - 1], params.R[i - 1], clip_floor(params.partition.upper(i)), rf, trace)


def gen_est_prob_int(stream: SymbolStream, params: GeneralParams,
                     rf: RegisterFile | None = None) -> list[float]:
    """Estimated classifier masses for I_1..I_{T-1}."""
    if rf is None:
        rf = RegisterFile()
    return [_prob_one(stream, params, i, rf) for i in range(1, params.T)]


@dataclass(frozen=True)
class GenCondExpResult:
    h_bar: tuple
    hits: tuple

    @property
    def degenerate(self) -> tuple:
        return tuple(i + 1 for i, s in enumerate(self.hits) if s == 0)


def gen_cond_exp(stream: SymbolStream, params: GeneralParams,
                 rf: RegisterFile | None = None, traces: list | None = None) -> GenCondExpResult:
    if rf is None:
        rf = RegisterFile()
    h_bar, hits = [], []
    for i in range(1, params.T + 1):
        trace = traces[i - 1] if traces is not None else None
        h, s = _cond_one(stream, params, i, rf, trace)
        h_bar.append(h)
        hits.append(s)
    return GenCondExpResult(h_bar=tuple(h_bar), hits=tuple(hits))


@dataclass(frozen=True)
class GeneralResult:
    estimate: float
    p_hat: tuple
    h_bar: tuple
    hits: tuple

    @property
    def degenerate(self) -> tuple:
        return tuple(i + 1 for i, s in enumerate(self.hits) if s == 0)


def run_general(stream: SymbolStream, params: GeneralParams,
                rf: RegisterFile | None = None) -> GeneralResult:
    """Interleave mass and conditional estimates interval by interval.

    Only the running weighted sum and the running mass are kept between
    intervals; ``p_hat``/``h_bar`` on the result are a reporting copy.
    """
    if rf is None:
        rf = RegisterFile()
    p_log, h_log, s_log = [], [], []
    T = params.T
    with rf.registers(4) as (acc, mass, p_i, h_i):
        rf[acc] = 0.0
        rf[mass] = 0.0
        for i in range(1, T):
            rf[p_i] = _prob_one(stream, params, i, rf)
            rf[h_i], s = _cond_one(stream, params, i, rf)
            rf[acc] = rf[acc] + rf[p_i] * rf[h_i]
            rf[mass] = rf[mass] + rf[p_i]
            p_log.append(rf[p_i])
            h_log.append(rf[h_i])
            s_log.append(s)
        rf[h_i], s = _cond_one(stream, params, T, rf)
        h_log.append(rf[h_i])
        s_log.append(s)
        rf[acc] = rf[acc] + (1 - rf[mass]) * rf[h_i]
        return GeneralResult(estimate=rf[acc], p_hat=tuple(p_log),
                             h_bar=tuple(h_log), hits=tuple(s_log))


@dataclass(frozen=True)
class ConstraintCheck:
    name: str
    value: float
    threshold: float
    passed: bool


def theory_constant_check(beta: float, gamma: float, C_N: float, C_R: float,
                          C_T: float) -> list[ConstraintCheck]:
    """Evaluate the constant requirements behind the formal guarantee."""
    r_min = 6 * C_T**2 * (beta + 1) ** 2.5
    return [
        ConstraintCheck("beta > 16", beta, 16.0, beta > 16),
        ConstraintCheck("gamma = beta/2", gamma, beta / 2, math.isclose(gamma, beta / 2)),
        ConstraintCheck("C_N > 36", C_N, 36.0, C_N > 36),
        ConstraintCheck("C_N > 108*beta", C_N, 108 * beta, C_N > 108 * beta),
        ConstraintCheck("C_T >= 30", C_T, 30.0, C_T >= 30),
        ConstraintCheck("C_R >= 6*C_T^2*(beta+1)^2.5", C_R, r_min, C_R >= r_min),
    ]
