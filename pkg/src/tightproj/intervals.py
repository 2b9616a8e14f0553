"""Finite unions of half-open real intervals ``[lo, hi)``."""
from __future__ import annotations

from dataclasses import dataclass


def _normalize(pieces):
    spans = sorted((float(lo), float(hi)) for lo, hi in pieces if hi > lo)
    merged: list[list[float]] = []
    for lo, hi in spans:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return tuple((lo, hi) for lo, hi in merged)


@dataclass(frozen=True)
class IntervalSet:
    """Sorted, disjoint, non-adjacent ``[lo, hi)`` spans."""

    spans: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "spans", _normalize(self.spans))

    @classmethod
    def interval(cls, lo: float, hi: float) -> IntervalSet:
        return cls(((lo, hi),))

    @property
    def measure(self) -> float:
        return sum(hi - lo for lo, hi in self.spans)

    @property
    def empty(self) -> bool:
        return not self.spans

    def __or__(self, other: IntervalSet) -> IntervalSet:
        return IntervalSet(self.spans + other.spans)

    def __and__(self, other: IntervalSet) -> IntervalSet:
        out = []
        i = j = 0
        a, b = self.spans, other.spans
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo < hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(tuple(out))

    def __sub__(self, other: IntervalSet) -> IntervalSet:
        out = []
        for lo, hi in self.spans:
            cur = lo
            for olo, ohi in other.spans:
                if ohi <= cur or olo >= hi:
                    continue
                if olo > cur:
                    out.append((cur, olo))
                cur = max(cur, ohi)
                if cur >= hi:
                    break
            if cur < hi:
                out.append((cur, hi))
        return IntervalSet(tuple(out))

    def __contains__(self, x: float) -> bool:
        return any(lo <= x < hi for lo, hi in self.spans)

    def __iter__(self):
        return iter(self.spans)

    def __len__(self):
        return len(self.spans)
