"""Discrete k-ary distributions: construction, exact entropy, sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import InvalidParameter, MalformedPartition, NormalizationError

SUM_TOL = 1e-9
CUSTOM_SUM_TOL = 1e-6

FAMILIES = ("uniform", "zipf", "geometric", "dirac", "two-level", "custom")


@dataclass(frozen=True)
class Pmf:
    probs: tuple

    def __post_init__(self):
        probs = tuple(float(v) for v in self.probs)
        object.__setattr__(self, "probs", probs)
        if len(probs) < 1:
            raise InvalidParameter("a pmf needs at least one symbol")
        if any(not math.isfinite(v) or v < 0 for v in probs):
            raise InvalidParameter("probabilities must be finite and non-negative")
        total = math.fsum(probs)
        if abs(total - 1.0) > SUM_TOL:
            raise NormalizationError(f"probabilities sum to {total!r}, not 1")

    @property
    def k(self) -> int:
        return len(self.probs)

    def __len__(self):
        return len(self.probs)

    def __getitem__(self, x):
        return self.probs[x]

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.asarray(self.probs, dtype=float)
        arr.setflags(write=False)
        return arr

    @cached_property
    def alias_table(self) -> "AliasTable":
        return AliasTable.build(self.probs)


@dataclass(frozen=True)
class AliasTable:
    """Vose alias table: O(k) build, O(1) per draw."""

    prob: np.ndarray
    alias: np.ndarray

    @classmethod
    def build(cls, probs: Sequence[float]) -> "AliasTable":
        k = len(probs)
        scaled = [p * k for p in probs]
        prob = np.ones(k, dtype=float)
        alias = np.arange(k, dtype=np.int64)
        small = [i for i, v in enumerate(scaled) if v < 1.0]
        large = [i for i, v in enumerate(scaled) if v >= 1.0]
        while small and large:
            lo = small.pop()
            hi = large.pop()
            prob[lo] = scaled[lo]
            alias[lo] = hi
            scaled[hi] = (scaled[hi] + scaled[lo]) - 1.0
            if scaled[hi] < 1.0:
                small.append(hi)
            else:
                large.append(hi)
        # leftovers are 1 up to rounding
        for i in small + large:
            prob[i] = 1.0
            alias[i] = i
        return cls(prob=prob, alias=alias)

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        k = len(self.prob)
        idx = rng.integers(0, k, size=size)
        coin = rng.random(size)
        return np.where(coin < self.prob[idx], idx, self.alias[idx])


@dataclass(frozen=True)
class FamilySpec:
    family: str
    k: int
    s: float = 1.0
    r: float = 0.5
    head_mass: float = 0.5
    head_count: int = 1
    probs: tuple = field(default=())

    @classmethod
    def parse(cls, text: str, k: int | None = None) -> "FamilySpec":
        """Parse a compact family string.

        Accepted forms: ``uniform``, ``dirac``, ``zipf:S``, ``geometric:R``,
        ``two-level:MASS:COUNT`` and ``custom:p0,p1,...`` (k is implied).
        """
        name, _, rest = text.strip().partition(":")
        name = name.lower().replace("_", "-")
        try:
            if name == "custom":
                probs = tuple(float(v) for v in rest.split(","))
                return cls("custom", len(probs), probs=probs)
            if k is None:
                raise InvalidParameter(f"family {name!r} needs an alphabet size k")
            if name in ("uniform", "dirac"):
                return cls(name, k)
            if name == "zipf":
                return cls(name, k, s=float(rest) if rest else 1.0)
            if name == "geometric":
                return cls(name, k, r=float(rest) if rest else 0.5)
            if name == "two-level":
                mass, _, count = rest.partition(":")
                return cls(name, k, head_mass=float(mass or 0.5),
                           head_count=int(count or 1))
        except ValueError as exc:
            if isinstance(exc, InvalidParameter):
                raise
            raise InvalidParameter(f"cannot parse family {text!r}: {exc}") from exc
        raise InvalidParameter(f"unknown family {name!r}")

    def label(self) -> str:
        if self.family == "zipf":
            return f"zipf:{self.s:g}"
        if self.family == "geometric":
            return f"geometric:{self.r:g}"
        if self.family == "two-level":
            return f"two-level:{self.head_mass:g}:{self.head_count}"
        if self.family == "custom":
            return "custom:" + ",".join(f"{v:g}" for v in self.probs)
        return self.family

    def to_dict(self) -> dict:
        out = {"family": self.family, "k": self.k}
        if self.family == "zipf":
            out["s"] = self.s
        elif self.family == "geometric":
            out["r"] = self.r
        elif self.family == "two-level":
            out["head_mass"] = self.head_mass
            out["head_count"] = self.head_count
        elif self.family == "custom":
            out["probs"] = list(self.probs)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "FamilySpec":
        data = dict(data)
        if "probs" in data:
            data["probs"] = tuple(data["probs"])
        return cls(**data)


def materialize(spec: FamilySpec) -> Pmf:
    k = spec.k
    if spec.family not in FAMILIES:
        raise InvalidParameter(f"unknown family {spec.family!r}")
    if not isinstance(k, int) or k < 1:
        raise InvalidParameter(f"k must be a positive integer, got {k!r}")

    if spec.family == "uniform":
        return Pmf((1.0 / k,) * k)
    if spec.family == "dirac":
        return Pmf((1.0,) + (0.0,) * (k - 1))
    if spec.family == "zipf":
        if not spec.s > 0:
            raise InvalidParameter("zipf exponent s must be > 0")
        weights = [(i + 1) ** -spec.s for i in range(k)]
        return _normalized(weights)
    if spec.family == "geometric":
        if not 0 < spec.r < 1:
            raise InvalidParameter("geometric ratio r must lie in (0, 1)")
        weights = [spec.r ** i for i in range(k)]
        return _normalized(weights)
    if spec.family == "two-level":
        m, c = spec.head_mass, spec.head_count
        if not 1 <= c <= k:
            raise InvalidParameter("head_count must lie in [1, k]")
        if not 0 < m <= 1:
            raise InvalidParameter("head_mass must lie in (0, 1]")
        if c == k and m != 1:
            raise InvalidParameter("head_count == k requires head_mass == 1")
        tail = k - c
        probs = [m / c] * c + ([(1.0 - m) / tail] * tail if tail else [])
        return Pmf(tuple(probs))

    probs = spec.probs
    if len(probs) != k:
        raise InvalidParameter("custom probs length must equal k")
    if any(v < 0 for v in probs):
        raise InvalidParameter("custom probs must be non-negative")
    total = math.fsum(probs)
    if abs(total - 1.0) > CUSTOM_SUM_TOL:
        raise NormalizationError(f"custom probs sum to {total!r}; refusing to rescale")
    return Pmf(tuple(v / total for v in probs))


def _normalized(weights):
    total = math.fsum(weights)
    return Pmf(tuple(w / total for w in weights))


def exact_entropy(p: Pmf) -> float:
    """Shannon entropy in nats; zero-probability symbols contribute nothing."""
    return math.fsum(-v * math.log(v) for v in p.probs if v > 0)


def sample(p: Pmf, rng: np.random.Generator) -> int:
    return int(p.alias_table.draw(rng, 1)[0])


def sample_many(p: Pmf, rng: np.random.Generator, n: int) -> np.ndarray:
    return p.alias_table.draw(rng, n)


def interval_masses(p: Pmf, thresholds: Sequence[float]) -> list[float]:
    """Total probability of each interval cut out by descending thresholds.

    ``thresholds = (l1, l2, ...)`` gives I_1 = [l1, 1], I_2 = [l2, l1), ...,
    and a last interval [0, l_last).
    """
    ts = [float(t) for t in thresholds]
    for t in ts:
        if not 0 < t <= 1:
            raise MalformedPartition(f"threshold {t!r} outside (0, 1]")
    if any(a <= b for a, b in zip(ts, ts[1:])):
        raise MalformedPartition("thresholds must be strictly decreasing")
    buckets = [[] for _ in range(len(ts) + 1)]
    for v in p.probs:
        j = 0
        while j < len(ts) and v < ts[j]:
            j += 1
        buckets[j].append(v)
    return [math.fsum(b) for b in buckets]
