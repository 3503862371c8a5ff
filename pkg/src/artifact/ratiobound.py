"""Lower bounds on conditional-ratio infima and the induced g-variation bound.

Three layers live here.  The recursion table propagates per-step contraction
coefficients v_k into pointwise lower bounds p(k, n) on two-sided ratio
infima.  The series

    R_n = sum_{k >= 0} prod_{j = 0}^{k} v_j(n),
    v_j(n) = exp(-beta * (T(j+1) + T(n+1))),

controls the variation of the induced one-sided conditional law g over pasts
agreeing on n sites: log-ratio <= 2 * log(1 + 1/R_n).  The third layer fits
growth exponents of the related partial-sum diagnostics.

Certification policy: divergence of R_n is declared only structurally (all
v_j equal to 1 beyond a finite index), never from the size of a partial sum.
Finite enclosures carry a geometric tail majorant whenever one exists; when
it does not, the result is a lower enclosure flagged unbounded above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .intervals import Interval, ONE, ZERO
from .fseq import FSequence
from .potential import DEFAULT_REL_WIDTH

_ROW_STORE_MAX = 2048
_LN2 = Interval.point(2.0).log()


def nondecreasing_envelope(values: Sequence[float]) -> np.ndarray:
    """Running maximum of contraction lower bounds.

    A contraction profile is nondecreasing in exact arithmetic; its float
    lower representatives need not be.  The running maximum stays below each
    true coefficient (it equals some earlier lower bound) while restoring the
    monotonicity the recursion requires.
    """
    return np.maximum.accumulate(np.asarray(values, dtype=np.float64))


class RatioTable:
    """Recursion state p(k, n) built from contraction coefficients v.

    Row n is derived from row n-1 by

        p(k, n) = v_k * p(k-1, n-1) + sum_{j=k}^{n-1} (v_{j+1} - v_j) * p(j, n-1)

    with p(-1, *) = 1 and p(0, 0) = v_0; the sum is empty at k = n.  Rows are
    accumulated in 80-bit extended precision (suffix sums of the increment
    terms), which plays the role of compensated summation for these
    well-conditioned nonnegative updates.
    """

    def __init__(self, v: Sequence[float], n_max: int):
        if n_max < 0:
            raise ValueError("n_max must be >= 0")
        v = np.asarray(v, dtype=np.float64)
        if len(v) < n_max + 1:
            raise ValueError(f"need {n_max + 1} coefficients, got {len(v)}")
        v = v[: n_max + 1]
        if np.any(v <= 0.0) or np.any(v > 1.0):
            raise ValueError("coefficients must lie in (0, 1]")
        if np.any(np.diff(v) < 0.0):
            raise ValueError("coefficients must be nondecreasing")
        self.v = v
        self.n_max = n_max
        self._vl = v.astype(np.longdouble)
        self._dv = np.diff(self._vl)
        self._p0 = np.empty(n_max + 1, dtype=np.float64)
        self._rows: dict = {}
        self._last_row = None
        self._fill()

    def _step(self, prev: np.ndarray, n: int) -> np.ndarray:
        # prev is row n-1 (length n) in longdouble
        w = self._dv[:n] * prev
        suffix = np.empty(n + 1, dtype=np.longdouble)
        suffix[n] = 0.0
        suffix[:n] = np.cumsum(w[::-1])[::-1]
        shifted = np.empty(n + 1, dtype=np.longdouble)
        shifted[0] = 1.0
        shifted[1:] = prev
        return self._vl[: n + 1] * shifted + suffix

    def _fill(self) -> None:
        row = np.array([self._vl[0]], dtype=np.longdouble)
        self._p0[0] = float(row[0])
        if self.n_max <= _ROW_STORE_MAX:
            self._rows[0] = row
        for n in range(1, self.n_max + 1):
            row = self._step(row, n)
            self._p0[n] = float(row[0])
            if self.n_max <= _ROW_STORE_MAX:
                self._rows[n] = row
        self._last_row = row

    def p(self, k: int, n: int) -> float:
        """Entry p(k, n); k = -1 is the boundary value 1."""
        if not -1 <= k <= n <= self.n_max:
            raise ValueError(f"need -1 <= k <= n <= {self.n_max}")
        if k == -1:
            return 1.0
        if k == 0:
            return float(self._p0[n])
        if n in self._rows:
            return float(self._rows[n][k])
        if n == self.n_max:
            return float(self._last_row[k])
        row = np.array([self._vl[0]], dtype=np.longdouble)
        for m in range(1, n + 1):
            row = self._step(row, m)
        self._rows[n] = row
        return float(row[k])

    def p0_path(self) -> np.ndarray:
        """The trajectory p(0, n) for n = 0 .. n_max."""
        return self._p0.copy()

    def limit_lower(self, N: int) -> float:
        return rb_limit_lower_bound(self.v, N)


def rb_recursion(v: Sequence[float], n_max: int) -> RatioTable:
    return RatioTable(v, n_max)


def rb_limit_lower_bound(v: Sequence[float], N: int) -> float:
    """Closed-form lower bound S_N / (1 + S_N), S_N = sum_k prod_{j<=k} v_j.

    Nondecreasing in N and never above the recursion limit lim_n p(0, n);
    equality holds for constant profiles.
    """
    v = np.asarray(v, dtype=np.float64)
    if N < 0 or len(v) < N + 1:
        raise ValueError("need coefficients v_0 .. v_N")
    if np.any(v <= 0.0) or np.any(v > 1.0):
        raise ValueError("coefficients must lie in (0, 1]")
    terms = np.cumprod(v[: N + 1].astype(np.longdouble))
    S = math.fsum(float(t) for t in terms)
    return S / (1.0 + S)


# -- the series R_n and the g-variation bound --------------------------------


@dataclass(frozen=True)
class RnSeries:
    """Outcome of summing R_n: an enclosure, or a certified divergence.

    ``unbounded_above`` marks the inconclusive case: summation stopped
    without a geometric majorant, so only the lower endpoint is meaningful
    and the upper endpoint is +inf.
    """

    window: int
    enclosure: Optional[Interval]
    divergent: bool
    certificate: str
    terms_used: int = 0
    unbounded_above: bool = False

    def is_finite(self) -> bool:
        return not self.divergent and not self.unbounded_above


def rn_series(
    F: FSequence,
    n: int,
    rel_width: float = DEFAULT_REL_WIDTH,
    max_terms: int = 200_000,
) -> RnSeries:
    """Sum R_n with interval terms, or certify its divergence structurally.

    Divergence requires v_j = 1 exactly for all j beyond a finite index,
    which happens precisely when the interaction has finite range R and the
    agreement window covers it (n >= R).  Otherwise every v_j is capped by
    exp(-beta * T(n+1)) < 1 and the remainder after k terms is bounded by a
    geometric series in that cap.
    """
    if n < 0:
        raise ValueError("window must be >= 0")
    p = F.potential
    vp = F.v_profile(n)
    settles = vp.settles_at()
    if settles is not None:
        prod = ONE
        for j in range(settles):
            prod = prod * vp.v(j)
        return RnSeries(
            window=n,
            enclosure=None,
            divergent=True,
            certificate=(
                f"v_j = 1 exactly for j >= {settles} (finite range within the window); "
                f"terms stay >= {prod.lo:.6g}"
            ),
            terms_used=settles,
        )

    win_log = F.log_ratio_left(n)
    cap_iv = Interval.point(-win_log.lo).exp()
    vcap = cap_iv.hi
    if not vcap < 1.0:
        # no usable contraction; sum a fixed number of terms, lower bound only
        S = ZERO
        u = ONE
        for k in range(max_terms):
            u = u * vp.v(k)
            S = S + u
        return RnSeries(
            window=n,
            enclosure=Interval(S.lo, math.inf),
            divergent=False,
            certificate="no geometric majorant available; truncated lower enclosure",
            terms_used=max_terms,
            unbounded_above=True,
        )

    win_tail = p.coupling_tail(n + 1, rel_width)
    geom_factor = (cap_iv / (1.0 - cap_iv)).hi
    horizon = 8192
    while True:
        horizon = min(horizon, max_terms)
        table = p.tail_enclosure_table(horizon, rel_width)
        t_lo, t_hi = table.enclosures(horizon)
        lo, hi, tails = _series_partials(p.beta, t_lo, t_hi, win_tail, geom_factor)
        hit = np.nonzero(tails <= rel_width * lo)[0]
        if hit.size or horizon >= max_terms:
            k = int(hit[0]) if hit.size else horizon - 1
            break
        horizon *= 4
    out = Interval(lo[k], math.nextafter(hi[k] + tails[k], math.inf))
    truncated = not hit.size
    return RnSeries(
        window=n,
        enclosure=out,
        divergent=False,
        certificate=(
            f"geometric tail majorant with ratio <= {vcap:.12g} after {k + 1} terms"
            + ("; stopped at the term cap" if truncated else "")
        ),
        terms_used=k + 1,
        unbounded_above=False,
    )


_EPS = float(np.finfo(np.float64).eps)


def _series_partials(
    beta: float,
    tail_lo: np.ndarray,
    tail_hi: np.ndarray,
    win_tail: Interval,
    geom_factor: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Endpoint arrays for the partial sums of R_n, plus tail majorants.

    Works in plain float64 with outward compensation: a cumulative product
    or sum of length k accrues at most k roundings, each a relative eps, so
    scaling by (1 -+ 1.01 * k * eps) restores a rigorous enclosure as long
    as k * eps stays far below 1 (always, for the term caps used here).
    """
    v_lo = np.exp(-np.nextafter(beta * np.nextafter(tail_hi + win_tail.hi, np.inf), np.inf))
    v_lo = np.nextafter(np.nextafter(v_lo, -np.inf), -np.inf)
    arg = np.maximum(np.nextafter(beta * np.nextafter(tail_lo + win_tail.lo, -np.inf), -np.inf), 0.0)
    v_hi = np.minimum(np.nextafter(np.nextafter(np.exp(-arg), np.inf), np.inf), 1.0)
    k = np.arange(tail_lo.size, dtype=np.float64)
    drift = 1.01 * _EPS * k
    u_lo = np.maximum(np.cumprod(v_lo) * (1.0 - drift), 0.0)
    u_hi = np.cumprod(v_hi) * (1.0 + drift)
    s_lo = np.maximum(np.cumsum(u_lo) * (1.0 - drift), 0.0)
    s_hi = np.nextafter(np.cumsum(u_hi) * (1.0 + drift), np.inf)
    tails = np.nextafter(u_hi * geom_factor, np.inf)
    return s_lo, s_hi, tails


@dataclass(frozen=True)
class GVariationBound:
    """Certified upper bound on the log-ratio of g over pasts agreeing on n sites."""

    window: int
    rn: RnSeries
    bound: Interval

    @property
    def certified_zero(self) -> bool:
        return self.rn.divergent


def g_variation_bound(
    F: FSequence,
    n: int,
    rel_width: float = DEFAULT_REL_WIDTH,
    max_terms: int = 200_000,
) -> GVariationBound:
    """Enclosure of 2 * log(1 + 1/R_n); exactly [0, 0] when R_n diverges."""
    rn = rn_series(F, n, rel_width, max_terms)
    if rn.divergent:
        return GVariationBound(window=n, rn=rn, bound=ZERO)
    enc = rn.enclosure
    if enc.lo <= 0.0:
        return GVariationBound(window=n, rn=rn, bound=Interval(0.0, math.inf))
    if math.isinf(enc.hi):
        inv = Interval(0.0, (ONE / Interval.point(enc.lo)).hi)
    else:
        inv = ONE / enc
    bound = Interval.point(2.0) * inv.log1p()
    return GVariationBound(window=n, rn=rn, bound=Interval(max(0.0, bound.lo), bound.hi))


# -- decay envelopes and profiles ---------------------------------------------


@dataclass(frozen=True)
class DecayEnvelope:
    """Certified majorant value(n) <= coefficient * n**(-exponent) for n >= start."""

    coefficient: float
    exponent: float
    start: int
    derivation: str


@dataclass(frozen=True)
class LogRProfile:
    """A profile n -> enclosure of (a bound on) log-ratio of g over n agreeing sites.

    ``envelope`` certifies an upper majorant beyond any horizon.  ``exact_power``
    marks synthetic profiles equal to c * n**(-s), for which lower bounds (and
    hence hypothesis failures) are also certifiable.  ``zero_beyond`` marks
    profiles vanishing identically from some window on.
    """

    source: str
    _at: Callable[[int], Interval]
    envelope: Optional[DecayEnvelope] = None
    exact_power: Optional[tuple] = None  # (c: Interval, s: float)
    zero_beyond: Optional[int] = None

    def at(self, n: int) -> Interval:
        return self._at(n)

    @staticmethod
    def power_form(c: Interval, s: float, source: str = "") -> "LogRProfile":
        if c.lo < 0.0:
            raise ValueError("profile values must be nonnegative")
        return LogRProfile(
            source=source or f"exact profile c * n^-{s}",
            _at=lambda n: c * Interval.point(float(n)).pow(-s),
            envelope=DecayEnvelope(c.hi, s, 1, "exact closed form"),
            exact_power=(c, s),
        )

    @staticmethod
    def from_fsequence(F: FSequence, rel_width: float = DEFAULT_REL_WIDTH) -> "LogRProfile":
        env = log_r_bound_envelope(F, rel_width)
        R = F.potential.finite_range
        return LogRProfile(
            source="variation bound of the induced conditional law",
            _at=lambda n: g_variation_bound(F, n, rel_width).bound,
            envelope=env,
            zero_beyond=R,
        )


def log_r_bound_envelope(
    F: FSequence, rel_width: float = DEFAULT_REL_WIDTH
) -> Optional[DecayEnvelope]:
    """Closed-form decay majorant of the g-variation bound, when one is certified.

    Every chain below starts from 2*log(1 + 1/R_n) <= 2/R_n and a certified
    lower bound on R_n over the first n+1 terms.

    Hyperbolic-tail couplings (quadratic power law, strength c = beta*amp < 1):
    tails obey amp/m <= T(m) <= amp/(m - 1/2), so the k-th product term is at
    least e^{-c*(4 + log 2)} * (k+1)^{-c}, whence

        R_n >= e^{-c*(4+log2)} * (1 - 2^{c-1})/(1 - c) * n^{1-c}.

    Summable weighted couplings (finite range excluded, handled as exact
    zeros): product terms are at least exp(-beta * W) with W the weighted
    total, and the window factor costs at most exp(-2*beta*amp/(q-1))
    (power, q > 2) or exp(-beta*A/(e*r*(1-e^{-r}))) (exponential), giving
    R_n >= const * n and a 1/n majorant.
    """
    p = F.potential
    c = p.coupling
    beta = Interval.point(p.beta)
    if p.beta == 0.0 or p.is_finite_range():
        return None  # profile is exactly zero beyond the range; no majorant needed
    amp = Interval.point(c.amplitude)
    if c.kind == "power_law" and c.q == 2.0:
        strength = beta * amp
        if not strength.hi < 1.0:
            return None
        ln2 = _LN2
        pre = (-(strength * (Interval.point(4.0) + ln2))).exp()
        two_pow = ((strength - 1.0) * ln2).exp()  # 2^(c-1)
        c2 = pre * (ONE - two_pow) / (ONE - strength)
        coeff = (Interval.point(2.0) / c2).hi
        s = (ONE - strength).lo
        return DecayEnvelope(
            coefficient=coeff,
            exponent=s,
            start=1,
            derivation=(
                "hyperbolic-tail chain: term_k >= e^{-c(4+log2)} (k+1)^{-c}, "
                f"c in [{strength.lo:.6g}, {strength.hi:.6g}]"
            ),
        )
    if c.kind == "power_law" and c.q > 2.0:
        W = c.weighted_total(rel_width)
        c0 = (-(beta * W)).exp()
        c1 = (-(beta * amp * (Interval.point(2.0) / Interval.point(c.q - 1.0)))).exp()
        coeff = (Interval.point(2.0) / (c0 * c1)).hi
        return DecayEnvelope(coeff, 1.0, 1, "summable weighted couplings, power tail")
    if c.kind == "exponential":
        W = c.weighted_total(rel_width)
        c0 = (-(beta * W)).exp()
        r = Interval.point(c.rate)
        e_r = (-r).exp()
        peak = amp / (Interval.point(math.e) * r * (ONE - e_r))
        c1 = (-(beta * peak)).exp()
        coeff = (Interval.point(2.0) / (c0 * c1)).hi
        return DecayEnvelope(coeff, 1.0, 1, "summable weighted couplings, exponential tail")
    return None


# -- growth diagnostics --------------------------------------------------------


def berbee_series_partial_sums(F: FSequence, n_max: int) -> np.ndarray:
    """Float partial sums S_N = sum_{n<=N} prod_{m<=n} t_m of the two-sided series.

    The terms come from the symmetric-window enumeration closed forms; this
    is a diagnostic (midpoint floats), not a certificate.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    p = F.potential
    kmax = n_max // 2 + 2
    table = p.tail_enclosure_table(kmax + 1)
    T = table.midpoints(kmax + 1)  # T[i] encloses tail at m = i+1
    J = np.array([p.strength(j) for j in range(1, kmax + 2)])
    m = np.arange(0, n_max + 1)
    k = m // 2
    log_t = -2.0 * p.beta * T[k]
    odd = m % 2 == 1
    log_t[odd] += p.beta * J[k[odd]]
    u = np.exp(np.cumsum(log_t))
    return np.cumsum(u)


def fit_growth_exponent(
    partial_sums: np.ndarray,
    n_lo: int = 2**8,
    n_hi: int = 2**14,
    grid_points: int = 60,
) -> float:
    """Exponent s of the best fit S_n ~ c * n**s + d over a log-spaced grid.

    The additive offset absorbs the early-term transient that biases a naive
    log-log regression; s is scanned and (c, d) solved by least squares.
    """
    if len(partial_sums) <= n_hi:
        raise ValueError("partial sums shorter than the fit range")
    ns = np.unique(
        np.round(np.logspace(math.log10(n_lo), math.log10(n_hi), grid_points)).astype(int)
    )
    y = partial_sums[ns]
    best_sse = math.inf
    best_s = 0.0
    for s in np.arange(0.02, 1.2, 0.001):
        X = np.vstack([ns.astype(np.float64) ** s, np.ones(len(ns))]).T
        coef, *_ = np.linalg.lstsq(X, y, rcond=None)
        resid = y - X @ coef
        sse = float(resid @ resid)
        if sse < best_sse:
            best_sse = sse
            best_s = float(s)
    return best_s


# -- Tauberian diagnostic ------------------------------------------------------


@dataclass(frozen=True)
class TauberianRow:
    n: int
    bound: Interval
    denominator: Interval
    ratio: Optional[Interval]


@dataclass(frozen=True)
class TauberianReport:
    alpha: float
    K: float
    fitted: bool
    asymptote: float  # 2 * K / Gamma(alpha)
    rows: tuple


def tauberian_diagnostic(
    F: FSequence,
    alpha: Optional[float] = None,
    K: Optional[float] = None,
    n_grid: Optional[Sequence[int]] = None,
    rel_width: float = DEFAULT_REL_WIDTH,
) -> TauberianReport:
    """Finite-grid comparison of the g-variation bound against its predicted decay.

    Per grid point n the row carries bound(n) / (log_ratio_right(n))^alpha,
    to be read against the asymptote 2*K/Gamma(alpha).  When (alpha, K) are
    not supplied they are fitted: the log of the cumulative one-sided ratio
    product is regressed on log n, the slope b gives alpha = 1 - b and the
    intercept gives K.  Asymptotic only; nothing here is a certificate.
    """
    if alpha is not None and not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    if K is not None and not K > 0.0:
        raise ValueError("K must be positive")
    if n_grid is None:
        n_grid = tuple(2**e for e in range(4, 13))
    n_grid = tuple(sorted(set(int(n) for n in n_grid)))
    if any(n < 1 for n in n_grid):
        raise ValueError("grid windows must be >= 1")

    fitted = alpha is None or K is None
    if fitted:
        fa, fK = _fit_hypothesis_pair(F, n_grid, rel_width)
        if alpha is None:
            alpha = min(1.0, max(fa, 1e-6))
        if K is None:
            K = fK

    rows = []
    for n in n_grid:
        b = g_variation_bound(F, n, rel_width).bound
        denom = F.log_ratio_right(n).pow(alpha) if F.log_ratio_right(n).lo > 0.0 else None
        ratio = None
        if denom is not None and denom.lo > 0.0:
            ratio = b / denom
            rows.append(TauberianRow(n=n, bound=b, denominator=denom, ratio=ratio))
        else:
            rows.append(TauberianRow(n=n, bound=b, denominator=ZERO, ratio=None))
    asymptote = 2.0 * K / math.gamma(alpha)
    return TauberianReport(alpha=alpha, K=K, fitted=fitted, asymptote=asymptote, rows=tuple(rows))


def _fit_hypothesis_pair(F: FSequence, n_grid, rel_width: float):
    """Least-squares (alpha, K) from the cumulative product of one-sided ratios."""
    n_top = max(n_grid)
    table = F.potential.tail_enclosure_table(n_top + 2, rel_width)
    T = table.midpoints(n_top + 2)
    cum = F.potential.beta * np.cumsum(T)  # entry i: sum of log-ratios for windows 0..i
    ns = np.array([n for n in n_grid if n >= 2], dtype=np.float64)
    logprod = np.array([cum[int(n)] for n in ns])
    X = np.vstack([np.log(ns), np.ones(len(ns))]).T
    (slope, intercept), *_ = np.linalg.lstsq(X, logprod, rcond=None)
    return 1.0 - float(slope), float(math.exp(intercept))
