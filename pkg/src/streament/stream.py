"""Single-pass sample stream and the register file used for word accounting.

The stream stands in for the external data source: it pre-draws symbols in
fixed-size blocks so that scanning a window is cheap, but it never hands the
same symbol out twice.  Everything an estimator *remembers* has to live in a
:class:`RegisterFile`; its high-water mark is what the memory claims are
checked against.
"""

from __future__ import annotations

from contextlib import contextmanager

import numpy as np

from .distributions import Pmf
from .errors import CapacityExceeded

DEFAULT_CAPACITY = 20

# Block schedule is fixed so the symbol sequence depends only on the seed.
_FIRST_BLOCK = 4096
_MAX_BLOCK = 1 << 18


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


class SymbolStream:
    """i.i.d. draws from ``pmf`` with an exact consumed-sample counter."""

    def __init__(self, pmf: Pmf, rng=None):
        self.pmf = pmf
        self.rng = make_rng(rng)
        self.consumed = 0
        self._table = pmf.alias_table
        self._buf = np.empty(0, dtype=np.int64)
        self._pos = 0
        self._next_block = _FIRST_BLOCK

    def _refill(self):
        self._buf = self._table.draw(self.rng, self._next_block)
        self._pos = 0
        self._next_block = min(2 * self._next_block, _MAX_BLOCK)

    def _chunks(self, n: int):
        while n > 0:
            if self._pos >= len(self._buf):
                self._refill()
            stop = min(len(self._buf), self._pos + n)
            chunk = self._buf[self._pos:stop]
            n -= stop - self._pos
            self._pos = stop
            yield chunk

    def next(self) -> int:
        if self._pos >= len(self._buf):
            self._refill()
        x = int(self._buf[self._pos])
        self._pos += 1
        self.consumed += 1
        return x

    __next__ = next

    def __iter__(self):
        return self

    def take(self, n: int) -> np.ndarray:
        """Return the next ``n`` symbols as an array (test/baseline helper)."""
        if n < 0:
            raise ValueError("n must be non-negative")
        out = np.concatenate(list(self._chunks(n))) if n else np.empty(0, np.int64)
        self.consumed += n
        return out

    def count_in_window(self, x: int, n: int, rf: "RegisterFile | None" = None) -> int:
        """Draw ``n`` fresh symbols and count how many equal ``x``.

        Charged as two registers (scan position and match count).  The scan
        is vectorised over the pre-drawn block, which is equivalent to the
        symbol-at-a-time loop.
        """
        if n < 0:
            raise ValueError("n must be non-negative")
        if rf is None:
            count = 0
            for chunk in self._chunks(n):
                count += int(np.count_nonzero(chunk == x))
            self.consumed += n
            return count
        with rf.registers(2) as (pos, matches):
            rf[pos] = 0
            rf[matches] = 0
            for chunk in self._chunks(n):
                rf[matches] += int(np.count_nonzero(chunk == x))
                rf[pos] += len(chunk)
            self.consumed += n
            return rf[matches]


class RegisterFile:
    """Fixed number of numeric cells with allocation and high-water tracking."""

    def __init__(self, capacity: int = DEFAULT_CAPACITY):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._cells = [0] * capacity
        self._live = [False] * capacity
        self._free = list(range(capacity - 1, -1, -1))
        self.live = 0
        self.high_water = 0

    def alloc(self, value=0) -> int:
        if not self._free:
            raise CapacityExceeded(
                f"register file full ({self.capacity} live registers)")
        h = self._free.pop()
        self._live[h] = True
        self._cells[h] = value
        self.live += 1
        if self.live > self.high_water:
            self.high_water = self.live
        return h

    def free(self, h: int) -> None:
        self._check(h)
        self._live[h] = False
        self._cells[h] = 0
        self._free.append(h)
        self.live -= 1

    def read(self, h: int):
        self._check(h)
        return self._cells[h]

    def write(self, h: int, value) -> None:
        self._check(h)
        self._cells[h] = value

    __getitem__ = read
    __setitem__ = write

    def _check(self, h):
        if not (0 <= h < self.capacity and self._live[h]):
            raise KeyError(f"register {h} is not allocated")

    @contextmanager
    def registers(self, n: int):
        """Allocate ``n`` registers for the duration of a block."""
        handles = []
        try:
            for _ in range(n):
                handles.append(self.alloc())
            yield handles
        finally:
            for h in reversed(handles):
                self.free(h)


def high_water(rf: RegisterFile) -> int:
    return rf.high_water
