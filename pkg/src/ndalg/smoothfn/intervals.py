"""Closed real intervals with exact rational endpoints."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real

INF = math.inf


def exact(value) -> Fraction:
    """Convert a finite real (int, float, Fraction or ``"p/q"`` string) to a Fraction.

    Floats convert to their exact binary value, so no rounding happens here.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not real numbers here")
    if isinstance(value, (Rational, str)):
        return Fraction(value)
    if isinstance(value, Real):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"expected a finite real, got {value!r}")
        return Fraction(value)
    raise TypeError(f"expected a real number, got {type(value).__name__}")


def _endpoint(value):
    if isinstance(value, float) and math.isinf(value):
        return value
    return exact(value)


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]``; endpoints may be infinite (then open there)."""

    lo: Fraction | float
    hi: Fraction | float

    def __post_init__(self):
        object.__setattr__(self, "lo", _endpoint(self.lo))
        object.__setattr__(self, "hi", _endpoint(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        if self.lo == INF or self.hi == -INF:
            raise ValueError("interval must contain a real number")

    @classmethod
    def everything(cls) -> Interval:
        return cls(-INF, INF)

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def length(self):
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: Interval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersect(self, other: Interval) -> Interval | None:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)

    def preimage(self, slope: Fraction, offset: Fraction) -> Interval:
        """The set of x with ``slope*x + offset`` in this interval (slope != 0)."""
        a = (self.lo - offset) / slope if math.isfinite(self.lo) else self.lo * _sign(slope)
        b = (self.hi - offset) / slope if math.isfinite(self.hi) else self.hi * _sign(slope)
        return Interval(min(a, b), max(a, b))

    def image(self, slope: Fraction, offset: Fraction) -> Interval:
        """The set ``slope*I + offset`` (slope != 0)."""
        a = slope * self.lo + offset if math.isfinite(self.lo) else self.lo * _sign(slope)
        b = slope * self.hi + offset if math.isfinite(self.hi) else self.hi * _sign(slope)
        return Interval(min(a, b), max(a, b))

    def clip(self, width=8) -> Interval:
        """Bounded sub-interval used when sampling; infinite sides are cut at ``width``."""
        lo, hi = self.lo, self.hi
        if not math.isfinite(lo) and not math.isfinite(hi):
            return Interval(-width, width)
        if not math.isfinite(lo):
            return Interval(hi - width, hi)
        if not math.isfinite(hi):
            return Interval(lo, lo + width)
        return self

    def grid(self, count: int) -> list[Fraction]:
        """``count`` evenly spaced rational points of the (clipped) interval, endpoints included."""
        box = self.clip()
        if count == 1 or box.lo == box.hi:
            return [(box.lo + box.hi) / 2]
        step = (box.hi - box.lo) / (count - 1)
        return [box.lo + i * step for i in range(count)]

    def __repr__(self):
        return f"[{_show(self.lo)}, {_show(self.hi)}]"


def _sign(q) -> int:
    return 1 if q > 0 else -1


def _show(v) -> str:
    if isinstance(v, float):
        return "inf" if v > 0 else "-inf"
    return str(v)
