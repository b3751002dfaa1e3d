"""Single-interval constant-space entropy estimator."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParameter
from .stream import RegisterFile, SymbolStream


@dataclass(frozen=True)
class SimpleParams:
    N: int
    R: int
    k: int
    eps: float

    def __post_init__(self):
        if self.N < 1 or self.R < 1:
            raise InvalidParameter("N and R must be >= 1")

    def predicted_samples(self) -> int:
        return self.R * (self.N + 1)


def simple_params(k: int, eps: float) -> SimpleParams:
    """Window ``N = ceil(2k/eps)`` and iterations ``R = ceil(4 ln^2(1+2k/eps) / eps^2)``."""
    if k < 1:
        raise InvalidParameter("k must be >= 1")
    if not eps > 0:
        raise InvalidParameter("eps must be > 0")
    N = math.ceil(2 * k / eps)
    R = math.ceil(4 * math.log1p(2 * k / eps) ** 2 / eps**2)
    return SimpleParams(N=N, R=R, k=k, eps=eps)


def run_simple(stream: SymbolStream, params: SimpleParams,
               rf: RegisterFile | None = None, trace: list | None = None) -> float:
    """Average of ``ln(N / (N_x + 1))`` over R draws of x.

    ``trace``, if given, collects the per-iteration values; it is test
    instrumentation and is not charged to the register file.
    """
    if rf is None:
        rf = RegisterFile()
    N, R = params.N, params.R
    with rf.registers(5) as (t, x, n_x, h_t, total):
        rf[t] = 0
        rf[total] = 0.0
        while rf[t] < R:
            rf[x] = stream.next()
            rf[n_x] = stream.count_in_window(rf[x], N, rf)
            rf[h_t] = math.log(N / (rf[n_x] + 1))
            if trace is not None:
                trace.append(rf[h_t])
            rf[total] += rf[h_t]
            rf[t] += 1
        rf[total] = rf[total] / R
        return rf[total]


def bias_bound(k: int, N: int) -> float:
    """Worst-case |E[estimate] - H(p)| for window N."""
    if N < 1:
        raise InvalidParameter("N must be >= 1")
    return k / N


def concentration_bound(R: int, N: float, mu: float) -> float:
    """Hoeffding tail for the mean of R values each spanning ln(N+1)."""
    if R < 1 or N <= 0:
        raise InvalidParameter("R must be >= 1 and N > 0")
    return min(1.0, 2.0 * math.exp(-2.0 * R * mu**2 / math.log(N + 1) ** 2))
