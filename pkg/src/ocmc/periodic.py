"""Ultimately periodic subsets of the naturals."""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Callable, Sequence


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@dataclass(frozen=True)
class UltimatelyPeriodicSet:
    """``{n | n < threshold and prefix[n]} ∪ {n >= threshold | residues[(n - threshold) % period]}``."""

    threshold: int
    period: int
    prefix: tuple[bool, ...]
    residues: tuple[bool, ...]

    def __post_init__(self):
        if self.threshold < 0:
            raise ValueError("threshold must be >= 0")
        if self.period < 1:
            raise ValueError("period must be >= 1")
        prefix = tuple(bool(b) for b in self.prefix)
        residues = tuple(bool(b) for b in self.residues)
        if len(prefix) != self.threshold:
            raise ValueError(f"prefix has length {len(prefix)}, expected {self.threshold}")
        if len(residues) != self.period:
            raise ValueError(f"residues has length {len(residues)}, expected {self.period}")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "residues", residues)

    @classmethod
    def empty(cls) -> "UltimatelyPeriodicSet":
        return cls(0, 1, (), (False,))

    @classmethod
    def full(cls) -> "UltimatelyPeriodicSet":
        return cls(0, 1, (), (True,))

    @classmethod
    def periodic(cls, period: int, members: Sequence[int], threshold: int = 0) -> "UltimatelyPeriodicSet":
        """Residue classes ``members`` mod ``period``, counted from ``threshold``."""
        res = [False] * period
        for r in members:
            res[r % period] = True
        return cls(threshold, period, (False,) * threshold, tuple(res))

    def __contains__(self, n: int) -> bool:
        return member(self, n)

    def to_json(self) -> dict:
        return {
            "threshold": self.threshold,
            "period": self.period,
            "prefix": [int(b) for b in self.prefix],
            "residues": [int(b) for b in self.residues],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "UltimatelyPeriodicSet":
        return cls(obj["threshold"], obj["period"], tuple(obj["prefix"]), tuple(obj["residues"]))


def member(s: UltimatelyPeriodicSet, n: int) -> bool:
    if n < 0:
        return False
    if n < s.threshold:
        return s.prefix[n]
    return s.residues[(n - s.threshold) % s.period]


def _align(s: UltimatelyPeriodicSet, threshold: int, period: int) -> tuple[tuple[bool, ...], tuple[bool, ...]]:
    # requires threshold >= s.threshold and s.period | period
    prefix = tuple(member(s, n) for n in range(threshold))
    residues = tuple(member(s, threshold + j) for j in range(period))
    return prefix, residues


def _combine(op: Callable[[bool, bool], bool], a: UltimatelyPeriodicSet, b: UltimatelyPeriodicSet):
    t = max(a.threshold, b.threshold)
    k = lcm(a.period, b.period)
    pa, ra = _align(a, t, k)
    pb, rb = _align(b, t, k)
    out = UltimatelyPeriodicSet(
        t, k, tuple(map(op, pa, pb)), tuple(map(op, ra, rb))
    )
    return normalize(out)


def union(a, b):
    return _combine(lambda x, y: x or y, a, b)


def intersect(a, b):
    return _combine(lambda x, y: x and y, a, b)


def complement(a):
    return normalize(
        UltimatelyPeriodicSet(
            a.threshold, a.period,
            tuple(not x for x in a.prefix), tuple(not x for x in a.residues),
        )
    )


def normalize(s: UltimatelyPeriodicSet) -> UltimatelyPeriodicSet:
    """Smallest period first, then the smallest threshold for that period."""
    res = s.residues
    k = s.period
    for d in _divisors(k):
        if all(res[j] == res[j % d] for j in range(d, k)):
            res, k = res[:d], d
            break
    prefix = list(s.prefix)
    res = list(res)
    while prefix and prefix[-1] == res[-1]:
        res = [prefix.pop()] + res[:-1]
    return UltimatelyPeriodicSet(len(prefix), k, tuple(prefix), tuple(res))


def equal(a: UltimatelyPeriodicSet, b: UltimatelyPeriodicSet) -> bool:
    t = max(a.threshold, b.threshold)
    k = lcm(a.period, b.period)
    return _align(a, t, k) == _align(b, t, k)
