"""Sampling loops shared by the interval estimators.

``matches(x)`` is the randomised classifier test; it draws its own windows
from the stream and charges its own registers.
"""

from __future__ import annotations

import math
from typing import Callable

from .stream import RegisterFile, SymbolStream


def mass_loop(stream: SymbolStream, matches: Callable[[int], bool], R: int,
              rf: RegisterFile) -> int:
    """Number of R fresh draws the classifier accepts."""
    with rf.registers(3) as (t, x, hits):
        rf[t] = 0
        rf[hits] = 0
        while rf[t] < R:
            rf[x] = stream.next()
            if matches(rf[x]):
                rf[hits] += 1
            rf[t] += 1
        return rf[hits]


def conditional_loop(stream: SymbolStream, matches: Callable[[int], bool],
                     window: int, R: int, clip_floor: float | None,
                     rf: RegisterFile, trace: list | None = None) -> tuple[float, int]:
    """Mean of ``ln(window/(N_x+1))`` over accepted draws, optionally floored.

    Returns ``(mean, accepted)``; ``mean`` is 0.0 when nothing was accepted.
    """
    with rf.registers(6) as (t, x, accepted, total, n_x, value):
        rf[t] = 0
        rf[accepted] = 0
        rf[total] = 0.0
        while rf[t] < R:
            rf[x] = stream.next()
            if matches(rf[x]):
                rf[accepted] += 1
                rf[n_x] = stream.count_in_window(rf[x], window, rf)
                rf[value] = math.log(window / (rf[n_x] + 1))
                if clip_floor is not None:
                    rf[value] = max(rf[value], clip_floor)
                if trace is not None:
                    trace.append(rf[value])
                rf[total] += rf[value]
            rf[t] += 1
        if rf[accepted] == 0:
            return 0.0, 0
        return rf[total] / rf[accepted], rf[accepted]
