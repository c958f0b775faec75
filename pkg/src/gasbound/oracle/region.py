"""Finite unions of intervals on the line with explicit endpoint semantics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Interval", "Region1D"]


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if math.isinf(self.lo) and self.lo_closed:
            object.__setattr__(self, "lo_closed", False)
        if math.isinf(self.hi) and self.hi_closed:
            object.__setattr__(self, "hi_closed", False)

    @property
    def empty(self) -> bool:
        return self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed))

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        left = (x > self.lo) | ((x == self.lo) & self.lo_closed)
        right = (x < self.hi) | ((x == self.hi) & self.hi_closed)
        return left & right

    def intersect(self, other: "Interval") -> "Interval":
        if self.lo > other.lo:
            lo, lc = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lc = other.lo, other.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hc = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hc = other.hi, other.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lc, hc)


class Region1D:
    """Sorted, disjoint union of intervals.

    Endpoint flags only affect membership (and therefore evaluations at
    exact boundary points), never integrals.
    """

    __slots__ = ("intervals",)

    def __init__(self, intervals=()):
        self.intervals = self._normalize([iv for iv in intervals if not iv.empty])

    @staticmethod
    def _normalize(ivs):
        ivs = sorted(ivs, key=lambda iv: (iv.lo, not iv.lo_closed))
        out = []
        for iv in ivs:
            if out:
                last = out[-1]
                touching = iv.lo < last.hi or (iv.lo == last.hi and (iv.lo_closed or last.hi_closed))
                if touching:
                    if iv.hi > last.hi or (iv.hi == last.hi and iv.hi_closed):
                        out[-1] = Interval(last.lo, iv.hi, last.lo_closed, iv.hi_closed)
                    continue
            out.append(iv)
        return tuple(out)

    # constructors -------------------------------------------------------

    @classmethod
    def real_line(cls) -> "Region1D":
        return cls([Interval(-math.inf, math.inf, False, False)])

    @classmethod
    def interval(cls, lo, hi, lo_closed=True, hi_closed=True) -> "Region1D":
        return cls([Interval(float(lo), float(hi), lo_closed, hi_closed)])

    @classmethod
    def outside_ball(cls, center, radius) -> "Region1D":
        """Closed complement ``{|x - center| >= radius}`` of the open ball."""
        c, r = float(center), float(radius)
        if r <= 0:
            return cls.real_line()
        if math.isinf(r):
            return cls()
        return cls([Interval(-math.inf, c - r, False, True), Interval(c + r, math.inf, True, False)])

    @classmethod
    def outside_ball_through(cls, center, point) -> "Region1D":
        """Closed complement of the open ball around ``center`` whose boundary holds ``point``.

        The endpoint on the side of ``point`` is ``point`` itself, so the
        membership of ``point`` does not depend on rounding of ``|point - center|``.
        """
        c, w = float(center), float(point)
        if w == c:
            return cls.real_line()
        lo, hi = (w, 2 * c - w) if w < c else (2 * c - w, w)
        return cls([Interval(-math.inf, lo, False, True), Interval(hi, math.inf, True, False)])

    # algebra ------------------------------------------------------------

    def intersect(self, other: "Region1D") -> "Region1D":
        return Region1D([a.intersect(b) for a in self.intervals for b in other.intervals])

    def __and__(self, other):
        return self.intersect(other)

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=bool)
        for iv in self.intervals:
            out |= iv.contains(x)
        return out

    def __contains__(self, x):
        return bool(self.contains(x))

    def is_subset(self, other: "Region1D") -> bool:
        return all(
            any(iv.intersect(ov) == iv for ov in other.intervals) for iv in self.intervals
        )

    @property
    def empty(self) -> bool:
        return not self.intervals

    @property
    def measure(self) -> float:
        return float(sum(iv.hi - iv.lo for iv in self.intervals))

    @property
    def breakpoints(self) -> tuple[float, ...]:
        pts = set()
        for iv in self.intervals:
            pts.update(x for x in (iv.lo, iv.hi) if math.isfinite(x))
        return tuple(sorted(pts))

    @property
    def hull(self) -> tuple[float, float]:
        if not self.intervals:
            return (math.nan, math.nan)
        return self.intervals[0].lo, self.intervals[-1].hi

    def __eq__(self, other):
        return isinstance(other, Region1D) and self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self):
        parts = []
        for iv in self.intervals:
            parts.append(f"{'[' if iv.lo_closed else '('}{iv.lo:g}, {iv.hi:g}{']' if iv.hi_closed else ')'}")
        return "Region1D(" + " U ".join(parts) + ")" if parts else "Region1D(empty)"
