"""Exact rational interval subsets of [0,1) and piecewise translations.

The measure algebra is simulated by finite unions of half-open rational
intervals; maps between them are piecewise translations, which are
automatically measure-preserving.  All endpoints are fractions and all
measures are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

Iv = tuple[Fraction, Fraction]


class IntervalError(ValueError):
    """Raised on malformed interval data."""


def _normalize(raw: Iterable[tuple]) -> tuple[Iv, ...]:
    ivs = sorted(
        (Fraction(a), Fraction(b)) for a, b in raw if Fraction(a) != Fraction(b)
    )
    for a, b in ivs:
        if not (0 <= a < b <= 1):
            raise IntervalError(f"interval [{a},{b}) outside [0,1)")
    merged: list[list[Fraction]] = []
    for a, b in ivs:
        if merged and a < merged[-1][1]:
            raise IntervalError(f"overlapping intervals at {a}")
        if merged and a == merged[-1][1]:
            merged[-1][1] = b
        else:
            merged.append([a, b])
    return tuple((a, b) for a, b in merged)


@dataclass(frozen=True)
class IntervalSet:
    intervals: tuple[Iv, ...]

    def __init__(self, raw: Iterable[tuple] = ()):
        object.__setattr__(self, "intervals", _normalize(raw))

    @property
    def measure(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), Fraction(0))

    def __contains__(self, x) -> bool:
        import bisect

        x = Fraction(x)
        i = bisect.bisect_right(self.intervals, (x,)) - 1
        if i >= 0 and self.intervals[i][0] <= x < self.intervals[i][1]:
            return True
        return i + 1 < len(self.intervals) and self.intervals[i + 1][0] <= x < self.intervals[i + 1][1]

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        pts = sorted(
            {p for a, b in self.intervals + other.intervals for p in (a, b)}
        )
        keep = [
            (a, b)
            for a, b in zip(pts, pts[1:])
            if (a + b) / 2 in self or (a + b) / 2 in other
        ]
        return IntervalSet(keep)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for a, b in self.intervals:
            for c, d in other.intervals:
                lo, hi = max(a, c), min(b, d)
                if lo < hi:
                    out.append((lo, hi))
        return IntervalSet(out)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        pts = sorted(
            {p for a, b in self.intervals + other.intervals for p in (a, b)}
        )
        keep = [
            (a, b)
            for a, b in zip(pts, pts[1:])
            if (a + b) / 2 in self and (a + b) / 2 not in other
        ]
        return IntervalSet(keep)

    def contains_set(self, other: "IntervalSet") -> bool:
        return not other.difference(self)


FULL = IntervalSet([(0, 1)])


def subset_of_measure(s: IntervalSet, m: Fraction) -> IntervalSet:
    """Leftmost subset of s with measure exactly m."""
    m = Fraction(m)
    if m < 0 or m > s.measure:
        raise IntervalError(f"no subset of measure {m} in a set of measure {s.measure}")
    out: list[Iv] = []
    left = m
    for a, b in s.intervals:
        if left == 0:
            break
        take = min(b - a, left)
        out.append((a, a + take))
        left -= take
    return IntervalSet(out)


@dataclass(frozen=True)
class IntervalMap:
    """A piecewise translation: pieces (src_lo, src_hi, offset), disjoint
    sources, disjoint targets.  Measure preservation is automatic."""

    pieces: tuple[tuple[Fraction, Fraction, Fraction], ...]

    def __init__(self, raw: Iterable[tuple]):
        pieces = tuple(
            sorted(
                (Fraction(a), Fraction(b), Fraction(o))
                for a, b, o in raw
                if Fraction(a) != Fraction(b)
            )
        )
        _normalize((a, b) for a, b, _ in pieces)  # validates disjoint sources
        _normalize((a + o, b + o) for a, b, o in pieces)  # ... and targets
        object.__setattr__(self, "pieces", pieces)

    def domain(self) -> IntervalSet:
        return IntervalSet((a, b) for a, b, _ in self.pieces)

    def image(self) -> IntervalSet:
        return IntervalSet((a + o, b + o) for a, b, o in self.pieces)

    def apply(self, x) -> Fraction:
        x = Fraction(x)
        for a, b, o in self.pieces:
            if a <= x < b:
                return x + o
        raise IntervalError(f"{x} outside the domain")

    def _overlapping(self, lo: Fraction, hi: Fraction):
        """Pieces whose source meets [lo, hi), via bisect on the sorted list."""
        import bisect

        i = max(0, bisect.bisect_left(self.pieces, (lo,)) - 1)
        while i < len(self.pieces) and self.pieces[i][0] < hi:
            if self.pieces[i][1] > lo:
                yield self.pieces[i]
            i += 1

    def apply_set(self, s: IntervalSet) -> IntervalSet:
        if not self.domain().contains_set(s):
            raise IntervalError("set is not inside the domain")
        out = []
        for c, d in s.intervals:
            for a, b, o in self._overlapping(c, d):
                lo, hi = max(a, c), min(b, d)
                if lo < hi:
                    out.append((lo + o, hi + o))
        return IntervalSet(out)

    def inverse(self) -> "IntervalMap":
        return IntervalMap((a + o, b + o, -o) for a, b, o in self.pieces)

    def restrict(self, s: IntervalSet) -> "IntervalMap":
        out = []
        for c, d in s.intervals:
            for a, b, o in self._overlapping(c, d):
                lo, hi = max(a, c), min(b, d)
                if lo < hi:
                    out.append((lo, hi, o))
        return IntervalMap(out)

    def compose(self, inner: "IntervalMap") -> "IntervalMap":
        """self after inner, on the points where the composite is defined."""
        out = []
        for a, b, o in inner.pieces:
            for c, d, p in self._overlapping(a + o, b + o):
                lo, hi = max(a + o, c), min(b + o, d)
                if lo < hi:
                    out.append((lo - o, hi - o, o + p))
        return IntervalMap(out)

    def agreement_with(self, other: "IntervalMap") -> IntervalSet:
        """Subset of the common domain where the two maps coincide."""
        out = []
        for a, b, o in self.pieces:
            for c, d, p in other._overlapping(a, b):
                if o != p:
                    continue
                lo, hi = max(a, c), min(b, d)
                if lo < hi:
                    out.append((lo, hi))
        return IntervalSet(out)


def identity_map(s: IntervalSet) -> IntervalMap:
    return IntervalMap((a, b, 0) for a, b in s.intervals)


def partial_bijection_between(a: IntervalSet, b: IntervalSet) -> IntervalMap | None:
    """The unique order- and measure-preserving piecewise translation a -> b,
    or None when the measures differ (no measure-preserving map can exist)."""
    if a.measure != b.measure:
        return None
    pieces = []
    src = list(a.intervals)
    dst = list(b.intervals)
    i = j = 0
    sa = da = None
    while i < len(src) and j < len(dst):
        lo_s = src[i][0] if sa is None else sa
        lo_d = dst[j][0] if da is None else da
        take = min(src[i][1] - lo_s, dst[j][1] - lo_d)
        pieces.append((lo_s, lo_s + take, lo_d - lo_s))
        sa, da = lo_s + take, lo_d + take
        if sa == src[i][1]:
            i, sa = i + 1, None
        if da == dst[j][1]:
            j, da = j + 1, None
    return IntervalMap(pieces)
