"""Directed-rounding interval arithmetic used by every enclosure in this package.

IEEE-754 double arithmetic rounds correctly to nearest, so nudging each
computed endpoint one ulp outward with ``math.nextafter`` yields a sound
enclosure for the rational operations.  ``math.exp`` / ``math.log`` / ``math.pow``
are not guaranteed correctly rounded by libm, so transcendental results are
nudged ``LIBM_GUARD_ULPS`` ulps instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

LIBM_GUARD_ULPS = 2

_INF = math.inf


def _down(x: float, ulps: int = 1) -> float:
    for _ in range(ulps):
        x = math.nextafter(x, -_INF)
    return x


def _up(x: float, ulps: int = 1) -> float:
    for _ in range(ulps):
        x = math.nextafter(x, _INF)
    return x


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi]; ``hi`` may be +inf for quantities unbounded above."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoint is NaN")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        if math.isinf(self.lo) and self.lo > 0:
            raise ValueError("lower endpoint must be finite or -inf")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def point(x: float) -> "Interval":
        return Interval(float(x), float(x))

    @staticmethod
    def hull(*members: "Interval") -> "Interval":
        return Interval(min(m.lo for m in members), max(m.hi for m in members))

    # -- queries -----------------------------------------------------------

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def encloses(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        if math.isinf(self.hi):
            return _INF
        return 0.5 * (self.lo + self.hi)

    def rel_width(self) -> float:
        scale = max(abs(self.lo), abs(self.hi))
        if scale == 0.0:
            return 0.0
        if math.isinf(self.width):
            return _INF
        return self.width / scale

    def certainly_lt(self, x: float) -> bool:
        return self.hi < x

    def certainly_le(self, x: float) -> bool:
        return self.hi <= x

    def certainly_gt(self, x: float) -> bool:
        return self.lo > x

    def certainly_ge(self, x: float) -> bool:
        return self.lo >= x

    # -- arithmetic --------------------------------------------------------

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other: "Interval | float") -> "Interval":
        o = _coerce(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other: "Interval | float") -> "Interval":
        return self + (-_coerce(other))

    def __rsub__(self, other: "Interval | float") -> "Interval":
        return _coerce(other) + (-self)

    def __mul__(self, other: "Interval | float") -> "Interval":
        o = _coerce(other)
        cands = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        cands = [0.0 if math.isnan(c) else c for c in cands]  # 0 * inf under enclosure
        if (self.lo == 0.0 == self.hi) or (o.lo == 0.0 == o.hi):
            return Interval(0.0, 0.0)  # an exactly-zero factor needs no rounding pad
        return Interval(_down(min(cands)), _up(max(cands)))

    __rmul__ = __mul__

    def __truediv__(self, other: "Interval | float") -> "Interval":
        o = _coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError("interval division by an interval containing zero")
        cands = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi]
        cands = [0.0 if math.isnan(c) else c for c in cands]
        return Interval(_down(min(cands)), _up(max(cands)))

    def __rtruediv__(self, other: "Interval | float") -> "Interval":
        return _coerce(other) / self

    # -- elementary functions ----------------------------------------------

    def exp(self) -> "Interval":
        return Interval(
            max(0.0, _down(math.exp(self.lo), LIBM_GUARD_ULPS)),
            _up(math.exp(self.hi), LIBM_GUARD_ULPS) if not math.isinf(self.hi) else _INF,
        )

    def log(self) -> "Interval":
        if self.lo <= 0.0:
            raise ValueError("log needs a strictly positive interval")
        hi = _INF if math.isinf(self.hi) else _up(math.log(self.hi), LIBM_GUARD_ULPS)
        return Interval(_down(math.log(self.lo), LIBM_GUARD_ULPS), hi)

    def log1p(self) -> "Interval":
        if self.lo <= -1.0:
            raise ValueError("log1p needs lo > -1")
        hi = _INF if math.isinf(self.hi) else _up(math.log1p(self.hi), LIBM_GUARD_ULPS)
        return Interval(_down(math.log1p(self.lo), LIBM_GUARD_ULPS), hi)

    def sqrt(self) -> "Interval":
        if self.lo < 0.0:
            raise ValueError("sqrt needs a nonnegative interval")
        hi = _INF if math.isinf(self.hi) else _up(math.sqrt(self.hi))
        return Interval(max(0.0, _down(math.sqrt(self.lo))), hi)

    def pow(self, exponent: float) -> "Interval":
        """x ** exponent for a positive base interval and a real exponent."""
        if self.lo < 0.0:
            raise ValueError("pow needs a nonnegative base interval")
        if self.lo == 0.0 and exponent < 0.0:
            raise ZeroDivisionError("negative power of an interval touching zero")
        pts = []
        for e in (self.lo, self.hi):
            if math.isinf(e):
                pts.append(_INF if exponent > 0 else 0.0)
            else:
                pts.append(math.pow(e, exponent))
        lo, hi = min(pts), max(pts)
        lo = max(0.0, _down(lo, LIBM_GUARD_ULPS)) if not math.isinf(lo) else lo
        hi = _up(hi, LIBM_GUARD_ULPS) if not math.isinf(hi) else hi
        return Interval(lo, hi)

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"


def _coerce(x: "Interval | float") -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(float(x))


ZERO = Interval.point(0.0)
ONE = Interval.point(1.0)


def sum_enclosure(values) -> Interval:
    """Interval sum of an iterable of Interval or float terms."""
    acc = ZERO
    for v in values:
        acc = acc + v
    return acc


def float_sum_enclosure(terms) -> Interval:
    """Sound enclosure of a sum of exact float terms.

    The terms themselves are exact; only the accumulation may round.  Pairwise
    summation in numpy keeps the error below ``ceil(log2 n) + 1`` ulps of the
    absolute-value sum, and we widen by that much.
    """
    import numpy as np

    arr = np.asarray(terms, dtype=np.float64)
    if arr.size == 0:
        return ZERO
    if arr.size == 1:
        return Interval.point(float(arr[0]))
    s = float(np.sum(arr))
    a = float(np.sum(np.abs(arr)))
    if a == 0.0:
        return ZERO
    eps = math.ulp(max(a, abs(s)))
    guard = (int(arr.size).bit_length() + 2) * eps
    return Interval(s - guard, s + guard)
