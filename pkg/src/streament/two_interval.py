"""Two-interval estimator: classify each draw as heavy (I1) or light (I2).

Symbols whose window frequency reaches ``ell`` are treated as heavy and get
a short window; light symbols get a long window but a clipped log estimate,
which narrows their range and lets far fewer iterations suffice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._loops import conditional_loop, mass_loop
from .errors import InvalidParameter, VacuousPartition
from .stream import RegisterFile, SymbolStream


@dataclass(frozen=True)
class TwoIntervalParams:
    k: int
    eps: float
    beta: float
    gamma: float
    ell: float
    N: int
    R: int
    N1: int
    R1: int
    N2: int
    R2: int
    C1: float = 1.0
    C2: float = 1.0

    def __post_init__(self):
        if not 0 < self.ell < 1:
            raise VacuousPartition(
                f"split point ell={self.ell:.6g} is not inside (0, 1); lower beta")
        if min(self.N, self.R, self.N1, self.R1, self.N2, self.R2) < 1:
            raise InvalidParameter("all windows and iteration counts must be >= 1")

    def worst_case_samples(self) -> int:
        """Sample budget if every conditional draw is accepted."""
        return (self.N * self.R + self.R1 * (self.N + self.N1)
                + self.R2 * (self.N + self.N2) + self.R + self.R1 + self.R2)


def two_interval_params(k: int, eps: float, beta: float = 2.0, gamma: float | None = None,
                        C1: float = 1.0, C2: float = 1.0) -> TwoIntervalParams:
    if k < 2:
        raise InvalidParameter("the two-interval split needs k >= 2")
    if not eps > 0:
        raise InvalidParameter("eps must be > 0")
    if beta <= 0 or C1 <= 0 or C2 <= 0:
        raise InvalidParameter("beta, C1 and C2 must be positive")
    if gamma is None:
        gamma = beta / 2
    lnk = math.log(k)
    N1 = math.ceil(C1 * k / (eps * lnk**gamma))
    R1 = max(1, math.ceil(C2 * math.log(k / eps) ** 2 / eps**2))
    N2 = math.ceil(C1 * k / eps)
    R2 = max(1, math.ceil(C2 * math.log(lnk / eps) ** 2 / eps**2))
    return TwoIntervalParams(k=k, eps=eps, beta=beta, gamma=gamma, ell=lnk**beta / k,
                             N=N1, R=R1, N1=N1, R1=R1, N2=N2, R2=R2, C1=C1, C2=C2)


def est_int(stream: SymbolStream, x: int, N: int, ell: float,
            rf: RegisterFile | None = None) -> int:
    """1 if ``x`` shows up at least ``N*ell`` times in the next N draws, else 2."""
    return 1 if stream.count_in_window(x, N, rf) >= N * ell else 2


def est_prob_int(stream: SymbolStream, N: int, R: int, ell: float,
                 rf: RegisterFile | None = None) -> float:
    if rf is None:
        rf = RegisterFile()
    hits = mass_loop(stream, lambda x: est_int(stream, x, N, ell, rf) == 1, R, rf)
    return hits / R


@dataclass(frozen=True)
class CondExpResult:
    h1: float
    h2: float
    s1: int
    s2: int

    @property
    def degenerate(self) -> tuple:
        return tuple(i for i, s in ((1, self.s1), (2, self.s2)) if s == 0)


def clip_floor(upper: float) -> float:
    """Lower clip ``ln(1/(4*upper))`` for an interval whose top is ``upper``."""
    return math.log(1.0 / (4.0 * upper))


def cond_exp(stream: SymbolStream, params: TwoIntervalParams,
             rf: RegisterFile | None = None, traces: tuple | None = None) -> CondExpResult:
    if rf is None:
        rf = RegisterFile()
    N, ell = params.N, params.ell
    t1, t2 = traces if traces is not None else (None, None)
    with rf.registers(1) as (h1,):
        rf[h1], s1 = conditional_loop(
            stream, lambda x: est_int(stream, x, N, ell, rf) == 1,
            params.N1, params.R1, None, rf, t1)
        h2, s2 = conditional_loop(
            stream, lambda x: est_int(stream, x, N, ell, rf) == 2,
            params.N2, params.R2, clip_floor(ell), rf, t2)
        return CondExpResult(h1=rf[h1], h2=h2, s1=s1, s2=s2)


@dataclass(frozen=True)
class TwoIntervalResult:
    estimate: float
    p_hat: float
    cond: CondExpResult

    @property
    def degenerate(self) -> tuple:
        return self.cond.degenerate

    def realized_samples(self, params: TwoIntervalParams) -> int:
        return (params.R * (1 + params.N) + params.R1 * (1 + params.N)
                + params.R2 * (1 + params.N)
                + self.cond.s1 * params.N1 + self.cond.s2 * params.N2)


def run_two_interval(stream: SymbolStream, params: TwoIntervalParams,
                     rf: RegisterFile | None = None) -> TwoIntervalResult:
    if rf is None:
        rf = RegisterFile()
    with rf.registers(1) as (p_hat,):
        rf[p_hat] = est_prob_int(stream, params.N, params.R, params.ell, rf)
        cond = cond_exp(stream, params, rf)
        estimate = rf[p_hat] * cond.h1 + (1 - rf[p_hat]) * cond.h2
        return TwoIntervalResult(estimate=estimate, p_hat=rf[p_hat], cond=cond)
