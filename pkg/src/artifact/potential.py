"""Translation-invariant spin pair interactions and their tail-sum enclosures.

A pair interaction is specified by a coupling law J on distances 1, 2, ... ,
an inverse temperature beta, and an optional truncation range.  The letter
alphabet is {-1, +1}.  The pair energy of sites i != j is
``-(beta / 2) * J(|i - j|) * x_i * x_j``, so the oscillation contributed by a
single pair is exactly ``beta * J(|i - j|)``.

All series over distances are returned as Interval enclosures: a finite
partial sum accumulated exactly plus a bracketing correction for the cut-off
tail (an integral bracket for power laws, a closed form for exponentials,
nothing for finite tables).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .intervals import Interval, ZERO, float_sum_enclosure

DEFAULT_REL_WIDTH = 1e-10

SPINS = (-1, 1)


@dataclass(frozen=True)
class CouplingLaw:
    """Nonnegative coupling strengths J(1), J(2), ... in one of three closed forms.

    power_law:    J(j) = amplitude * j**(-q), q > 1
    exponential:  J(j) = amplitude * exp(-rate * j), rate > 0
    finite_table: J(j) = values[j - 1] for j <= len(values), else 0
    """

    kind: str
    q: float = 0.0
    amplitude: float = 1.0
    rate: float = 0.0
    values: tuple = ()

    def __post_init__(self) -> None:
        if self.kind == "power_law":
            if not self.q > 1.0:
                raise ValueError("power law needs q > 1 for summability")
            if self.amplitude < 0.0:
                raise ValueError("amplitude must be nonnegative")
        elif self.kind == "exponential":
            if not self.rate > 0.0:
                raise ValueError("exponential law needs rate > 0")
            if self.amplitude < 0.0:
                raise ValueError("amplitude must be nonnegative")
        elif self.kind == "finite_table":
            if any(v < 0.0 for v in self.values):
                raise ValueError("table entries must be nonnegative")
        else:
            raise ValueError(f"unknown coupling kind {self.kind!r}")

    @staticmethod
    def power_law(q: float, amplitude: float = 1.0) -> "CouplingLaw":
        return CouplingLaw(kind="power_law", q=float(q), amplitude=float(amplitude))

    @staticmethod
    def exponential(rate: float, amplitude: float = 1.0) -> "CouplingLaw":
        return CouplingLaw(kind="exponential", rate=float(rate), amplitude=float(amplitude))

    @staticmethod
    def finite_table(values) -> "CouplingLaw":
        return CouplingLaw(kind="finite_table", values=tuple(float(v) for v in values))

    @staticmethod
    def zero() -> "CouplingLaw":
        return CouplingLaw(kind="finite_table", values=())

    def strength(self, j: int) -> float:
        """J(j) as an exact double (products with amplitude round once)."""
        if j < 1:
            raise ValueError("distances start at 1")
        if self.kind == "power_law":
            return self.amplitude * float(j) ** (-self.q)
        if self.kind == "exponential":
            return self.amplitude * math.exp(-self.rate * j)
        return self.values[j - 1] if j <= len(self.values) else 0.0

    @property
    def finite_range(self) -> Optional[int]:
        """Largest distance with a nonzero coupling, or None if unbounded."""
        if self.kind == "finite_table":
            rng = 0
            for j, v in enumerate(self.values, start=1):
                if v != 0.0:
                    rng = j
            return rng
        if self.amplitude == 0.0:
            return 0
        return None

    def is_zero(self) -> bool:
        return self.finite_range == 0

    def tail(self, n: int, rel_width: float = DEFAULT_REL_WIDTH) -> Interval:
        """Enclosure of sum_{j >= n} J(j)."""
        if n < 1:
            raise ValueError("tail index starts at 1")
        if self.kind == "finite_table":
            return float_sum_enclosure([v for j, v in enumerate(self.values, 1) if j >= n])
        if self.amplitude == 0.0:
            return ZERO
        if self.kind == "exponential":
            # sum_{j>=n} e^{-r j} = e^{-r n} / (1 - e^{-r}), evaluated in intervals
            r = self.rate
            num = Interval.point(-r * n).exp()
            den = 1.0 - Interval.point(-r).exp()
            return Interval.point(self.amplitude) * (num / den)
        return Interval.point(self.amplitude) * _power_tail(self.q, n, rel_width)

    def weighted_total(self, rel_width: float = DEFAULT_REL_WIDTH):
        """Enclosure of sum_{j >= 1} j * J(j), or None when the series diverges.

        Divergence is structural: a power law with q <= 2 majorizes a harmonic
        series after weighting, so no partial sum is consulted.
        """
        if self.kind == "finite_table":
            return float_sum_enclosure(
                [j * v for j, v in enumerate(self.values, 1)]
            )
        if self.amplitude == 0.0:
            return ZERO
        if self.kind == "exponential":
            # sum j e^{-rj} = e^{-r} / (1 - e^{-r})^2
            e = Interval.point(-self.rate).exp()
            return Interval.point(self.amplitude) * (e / ((1.0 - e) * (1.0 - e)))
        if self.q <= 2.0:
            return None
        return Interval.point(self.amplitude) * _power_tail(self.q - 1.0, 1, rel_width)


@lru_cache(maxsize=4096)
def _power_tail(q: float, n: int, rel_width: float) -> Interval:
    """Enclosure of sum_{j >= n} j**(-q) by partial sum plus integral bracket.

    The cutoff M grows until the bracket width [integral, first-term + integral]
    is below ``rel_width`` relative to the sum.  The partial sum is accumulated
    in exact doubles with a pairwise-summation error bound.
    """
    M = max(n + 16, 64)
    while True:
        j = np.arange(n, M + 1, dtype=np.float64)
        partial = float_sum_enclosure(j ** (-q))
        integral = (M + 1.0) ** (1.0 - q) / (q - 1.0)
        first = (M + 1.0) ** (-q)
        tail_lo = math.nextafter(integral, 0.0)
        tail_hi = math.nextafter(first + integral, math.inf)
        out = partial + Interval(tail_lo, tail_hi)
        if out.rel_width() <= rel_width or M > 5 * 10**7:
            return out
        M *= 4


_LD_EPS = float(np.finfo(np.longdouble).eps)
_TABLE_CHUNK = 2_000_000
_TABLE_ANCHOR_CAP = 240_000_000


class TailEnclosureTable:
    """Enclosures of sum_{j >= m} J(j) for every m up to a fixed horizon.

    Point queries via ``tail`` re-sum the series per call, which is wasteful
    when a contraction profile needs thousands of consecutive tails.  This
    table makes one backward pass: an integral bracket anchors the series at
    a far cutoff M, then suffix sums accumulate toward m = 1 in extended
    precision, with the accumulated rounding budget tracked explicitly and
    added to both endpoints.
    """

    def __init__(self, law: CouplingLaw, horizon: int, rel_width: float = DEFAULT_REL_WIDTH):
        if horizon < 1:
            raise ValueError("horizon must be >= 1")
        self.law = law
        self.horizon = horizon
        self.rel_width = rel_width
        self._lo = None
        self._hi = None
        if law.kind == "power_law" and law.amplitude > 0.0:
            self._lo, self._hi = _power_suffix_arrays(law.q, horizon, rel_width)

    def at(self, m: int) -> Interval:
        if not 1 <= m <= self.horizon + 1:
            raise ValueError(f"m = {m} outside table horizon {self.horizon}")
        if self._lo is None:
            return self.law.tail(m, self.rel_width)
        base = Interval(float(self._lo[m - 1]), float(self._hi[m - 1]))
        return Interval.point(self.law.amplitude) * base

    def midpoints(self, m_max: int) -> np.ndarray:
        """Float midpoints of the tails at m = 1 .. m_max, for diagnostics."""
        if m_max > self.horizon + 1:
            raise ValueError("m_max beyond table horizon")
        if self._lo is None:
            return np.array([self.at(m).mid for m in range(1, m_max + 1)])
        return self.law.amplitude * 0.5 * (self._lo[:m_max] + self._hi[:m_max])

    def enclosures(self, m_max: int):
        """Endpoint arrays (lo, hi) of the tails at m = 1 .. m_max."""
        if m_max > self.horizon + 1:
            raise ValueError("m_max beyond table horizon")
        if self._lo is None:
            pairs = [self.at(m) for m in range(1, m_max + 1)]
            return (
                np.array([iv.lo for iv in pairs]),
                np.array([iv.hi for iv in pairs]),
            )
        A = self.law.amplitude
        lo = np.nextafter(A * self._lo[:m_max], -np.inf)
        hi = np.nextafter(A * self._hi[:m_max], np.inf)
        return np.maximum(lo, 0.0), hi


@lru_cache(maxsize=16)
def _power_suffix_arrays(q: float, horizon: int, rel_width: float):
    """Suffix sums of j**(-q) for m = 1 .. horizon+1 as (lo, hi) arrays.

    The anchor cutoff M is chosen so the integral bracket at M is below
    ``rel_width`` relative to the smallest tail in the table, capped for
    memory; the cap only widens enclosures, never breaks them.
    """
    deepest = float(horizon + 1) ** (1.0 - q) / (q - 1.0)
    M = int(min(max(4.0 * horizon, (rel_width * deepest) ** (-1.0 / q)), _TABLE_ANCHOR_CAP))
    integral = (M + 1.0) ** (1.0 - q) / (q - 1.0)
    anchor_lo = math.nextafter(integral, 0.0)
    anchor_hi = math.nextafter((M + 1.0) ** (-q) + integral, math.inf)

    keep = horizon + 1
    suffix = np.empty(keep, dtype=np.float64)
    acc = np.longdouble(0.0)        # sum over already-processed far terms
    err_int = np.longdouble(0.0)    # sum of |partial sums| seen by the accumulation
    hi_edge = M
    while hi_edge > keep:
        lo_edge = max(keep + 1, hi_edge - _TABLE_CHUNK + 1)
        js = np.arange(hi_edge, lo_edge - 1, -1, dtype=np.float64)
        partial = np.cumsum(js ** (-q), dtype=np.longdouble) + acc
        err_int += partial.sum()
        acc = partial[-1]
        hi_edge = lo_edge - 1
    js = np.arange(keep, 0, -1, dtype=np.float64)
    partial = np.cumsum(js ** (-q), dtype=np.longdouble) + acc
    err_int += partial.sum()
    suffix[:] = partial[::-1].astype(np.float64)

    # sequential-summation error: eps per add, each bounded by the running sum
    err = float(_LD_EPS * err_int) * 4.0 + float(np.finfo(np.float64).eps) * float(partial[-1])
    lo = np.nextafter(suffix + (anchor_lo - err), -np.inf)
    hi = np.nextafter(suffix + (anchor_hi + err), np.inf)
    return lo, hi


@dataclass(frozen=True)
class PairPotential:
    """A coupling law at inverse temperature beta, optionally truncated.

    ``truncation_range = R`` zeroes every coupling at distance > R, giving a
    finite-range interaction whose kernels are exactly computable.
    """

    coupling: CouplingLaw
    beta: float
    truncation_range: Optional[int] = None

    def __post_init__(self) -> None:
        if self.beta < 0.0:
            raise ValueError("beta must be nonnegative")
        if self.truncation_range is not None and self.truncation_range < 0:
            raise ValueError("truncation range must be nonnegative")

    def strength(self, j: int) -> float:
        if self.truncation_range is not None and j > self.truncation_range:
            return 0.0
        return self.coupling.strength(j)

    @property
    def finite_range(self) -> Optional[int]:
        base = self.coupling.finite_range
        if self.truncation_range is None:
            return base
        if base is None:
            return self.truncation_range
        return min(base, self.truncation_range)

    def is_finite_range(self) -> bool:
        return self.finite_range is not None

    def coupling_tail(self, n: int, rel_width: float = DEFAULT_REL_WIDTH) -> Interval:
        """Enclosure of sum_{j >= n} of the effective (possibly truncated) J."""
        R = self.truncation_range
        if R is None:
            return self.coupling.tail(n, rel_width)
        if n > R:
            return ZERO
        return float_sum_enclosure([self.coupling.strength(j) for j in range(n, R + 1)])

    def beyond_range_tail(self, rel_width: float = DEFAULT_REL_WIDTH) -> Interval:
        """Mass of the raw law beyond the truncation range (zero when untruncated)."""
        R = self.truncation_range
        if R is None:
            return ZERO
        return self.coupling.tail(R + 1, rel_width)

    def tail_enclosure_table(self, horizon: int, rel_width: float = DEFAULT_REL_WIDTH):
        """Bulk effective-tail enclosures; see TailEnclosureTable."""
        if self.truncation_range is None:
            return TailEnclosureTable(self.coupling, horizon, rel_width)
        return _TruncatedTailTable(self, horizon, rel_width)


class _TruncatedTailTable:
    """Per-query effective tails for truncated couplings (at most R terms each)."""

    def __init__(self, potential: "PairPotential", horizon: int, rel_width: float):
        self.potential = potential
        self.horizon = horizon
        self.rel_width = rel_width

    def at(self, m: int) -> Interval:
        if not 1 <= m <= self.horizon + 1:
            raise ValueError(f"m = {m} outside table horizon {self.horizon}")
        return self.potential.coupling_tail(m, self.rel_width)

    def midpoints(self, m_max: int) -> np.ndarray:
        if m_max > self.horizon + 1:
            raise ValueError("m_max beyond table horizon")
        return np.array([self.at(m).mid for m in range(1, m_max + 1)])

    def enclosures(self, m_max: int):
        if m_max > self.horizon + 1:
            raise ValueError("m_max beyond table horizon")
        pairs = [self.at(m) for m in range(1, m_max + 1)]
        return (
            np.array([iv.lo for iv in pairs]),
            np.array([iv.hi for iv in pairs]),
        )


def tail_variation(p: PairPotential, n: int, rel_width: float = DEFAULT_REL_WIDTH) -> Interval:
    """Enclosure of the total oscillation of interactions linking site 0 to [n, inf).

    For a pair interaction this is beta * sum_{j >= n} J(j): the pairs {0, j}
    with j >= n >= 1 are exactly the sets through 0 meeting [n, inf), and each
    contributes oscillation beta * J(j).
    """
    if n < 1:
        raise ValueError("n starts at 1")
    return Interval.point(p.beta) * p.coupling_tail(n, rel_width)


@dataclass(frozen=True)
class SeriesValue:
    """Outcome of a nonnegative series: an enclosure, or a certified divergence."""

    enclosure: Optional[Interval]
    divergent: bool
    certificate: str

    def is_finite(self) -> bool:
        return not self.divergent


def ruelle_sum(p: PairPotential, rel_width: float = DEFAULT_REL_WIDTH) -> SeriesValue:
    """Diameter-weighted total influence sum_{sets through 0} diam * osc.

    Both orientations {0, j} and {-j, 0} contribute beta/2 * J(j) at diameter
    j, so the total is beta * sum_j j * J(j).  Divergence (power law with
    q <= 2) is certified by harmonic comparison, never from partial sums.
    """
    total = _effective_weighted_total(p, rel_width)
    if total is None:
        return SeriesValue(
            None,
            True,
            f"j * J(j) ~ j**(1 - {p.coupling.q}) with exponent >= -1 majorizes a harmonic series",
        )
    return SeriesValue(Interval.point(p.beta) * total, False, "finite weighted coupling sum")


def coelho_quas_sum(p: PairPotential, rel_width: float = DEFAULT_REL_WIDTH) -> SeriesValue:
    """One-sided variant: only sets whose leftmost site is 0, half of ruelle_sum."""
    total = _effective_weighted_total(p, rel_width)
    if total is None:
        return SeriesValue(
            None,
            True,
            f"j * J(j) ~ j**(1 - {p.coupling.q}) with exponent >= -1 majorizes a harmonic series",
        )
    return SeriesValue(Interval.point(0.5 * p.beta) * total, False, "finite weighted coupling sum")


def _effective_weighted_total(p: PairPotential, rel_width: float):
    R = p.truncation_range
    if R is None:
        return p.coupling.weighted_total(rel_width)
    return float_sum_enclosure(
        [j * p.coupling.strength(j) for j in range(1, R + 1)]
    )


@dataclass(frozen=True)
class VariationProfile:
    """Tail-variation profile n -> enclosure, with certified asymptotics when known.

    ``slope`` encloses lim n * at(n) (hi may be +inf); ``remainder_summable``
    states whether at(n) - slope/n has a finite sum.  ``exact`` marks profiles
    whose closed form is an equality rather than an upper bound.  ``form``
    names the closed-form family ("pair_tail", "hyperbolic") so downstream
    criteria know which asymptotic identities apply.
    """

    source: str
    _at: object
    slope: Optional[Interval] = None
    remainder_summable: Optional[bool] = None
    exact: bool = True
    form: Optional[str] = None

    def at(self, n: int) -> Interval:
        return self._at(n)

    @staticmethod
    def from_potential(p: PairPotential, rel_width: float = DEFAULT_REL_WIDTH) -> "VariationProfile":
        slope, summable = _slope_certificate(p)
        return VariationProfile(
            source=_describe(p),
            _at=lambda n: tail_variation(p, n, rel_width),
            slope=slope,
            remainder_summable=summable,
            exact=True,
            form="pair_tail",
        )

    @staticmethod
    def hyperbolic(coefficient: Interval, source: str = "c/n profile") -> "VariationProfile":
        """Profile at(n) = c / n exactly, for criteria driven by synthetic inputs."""
        return VariationProfile(
            source=source,
            _at=lambda n: coefficient * Interval(1.0, 1.0) / float(n),
            slope=coefficient,
            remainder_summable=True,
            exact=True,
            form="hyperbolic",
        )


def _slope_certificate(p: PairPotential):
    """Enclosure of lim n * tail_variation(n) plus remainder summability.

    Finite range, exponential, and power laws with q > 2 have slope 0 with a
    summable profile.  q = 2 has slope beta * amplitude exactly, and the
    remainder b(T(n) - 1/n) telescopes to the finite value beta * amplitude.
    q < 2 has n * tail ~ n**(2-q) -> inf.
    """
    c = p.coupling
    if p.is_finite_range() or c.kind == "exponential" or (
        c.kind == "power_law" and c.q > 2.0
    ):
        return Interval.point(0.0), True
    if c.kind == "power_law" and c.q == 2.0:
        return strength_interval(p), True
    return Interval(0.0, math.inf), False


def strength_fraction(p: PairPotential) -> Fraction:
    """beta * amplitude as an exact rational, for threshold trichotomies.

    Criteria compare this strength against rationals like 1/2, where a one-ulp
    enclosure pad would turn an exact boundary case into a straddle.
    """
    return Fraction(p.beta) * Fraction(p.coupling.amplitude)


def fraction_interval(x: Fraction) -> Interval:
    """Tightest Interval around an exact rational (a point when representable)."""
    f = float(x)
    g = Fraction(f)
    if g == x:
        return Interval.point(f)
    if g < x:
        return Interval(f, math.nextafter(f, math.inf))
    return Interval(math.nextafter(f, -math.inf), f)


def strength_interval(p: PairPotential) -> Interval:
    return fraction_interval(strength_fraction(p))


def _describe(p: PairPotential) -> str:
    c = p.coupling
    if c.kind == "power_law":
        base = f"power_law(q={c.q}, amplitude={c.amplitude})"
    elif c.kind == "exponential":
        base = f"exponential(rate={c.rate}, amplitude={c.amplitude})"
    else:
        base = f"finite_table({list(c.values)})"
    trunc = "" if p.truncation_range is None else f", R={p.truncation_range}"
    return f"{base}, beta={p.beta}{trunc}"
