"""Sufficient uniqueness criteria evaluated as certified verdicts.

Every check here tests the *hypothesis* of one sufficient condition for
uniqueness of the Gibbs state (or of the shift-invariant Gibbs state) of a
pair coupling.  The vocabulary is deliberately one-sided:

  Holds         the hypothesis is certified by a closed form,
  Fails         the hypothesis is certified to fail; nothing follows about
                non-uniqueness, since none of the criteria has a converse,
  Inconclusive  no closed form decides either way at the available widths.

Certification policy: a verdict other than Inconclusive must rest on a
closed-form argument (exact rational threshold comparison, an interval
enclosure strictly clear of the threshold, or a structural divergence or
comparison witness).  Finite truncations and numeric partial sums alone never
certify anything; they only appear in diagnostics.

Exact thresholds are compared in rational arithmetic.  The power-law family
with decay exponent 2 has critical strength c = beta * amplitude = 1/2 for
several criteria, and enclosure padding would misreport the exactly-critical
case as a straddle; Fractions keep the boundary sharp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

import numpy as np

from .fseq import FSequence
from .intervals import Interval, ZERO
from .kernel import dobrushin_sum
from .potential import (
    DEFAULT_REL_WIDTH,
    PairPotential,
    VariationProfile,
    coelho_quas_sum,
    fraction_interval,
    ruelle_sum,
    strength_fraction,
)
from .ratiobound import LogRProfile

HOLDS = "Holds"
FAILS = "Fails"
INCONCLUSIVE = "Inconclusive"

UNIQUE_GIBBS_BERNOULLI = "unique Gibbs + Bernoulli"
UNIQUE_GIBBS = "unique Gibbs"
UNIQUE_TINV_GIBBS = "unique T-invariant Gibbs"

_OUTCOMES = (HOLDS, FAILS, INCONCLUSIVE)
_STRENGTH_RANK = {
    UNIQUE_GIBBS_BERNOULLI: 3,
    UNIQUE_GIBBS: 2,
    UNIQUE_TINV_GIBBS: 1,
}

# alpha grid for the product/block-sum search; every entry exceeds 1/2 because
# the dyadic block sums need squared-profile exponents above 1.
DEFAULT_ALPHA_GRID = (0.51, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0)

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Verdict:
    """Outcome of one criterion on one input.

    ``margin`` is the check's distance to its threshold as an enclosure,
    oriented so that a certainly-positive margin accompanies Holds and a
    certainly-nonpositive one accompanies Fails; it is None when the failure
    is structural (an infinite limsup, a divergent comparison series) or the
    check never reached a scalar comparison.  ``certificate`` names the closed
    form or witness behind the outcome and is the only place to look for the
    reasoning; ``conclusion_strength`` states what the criterion would buy if
    its hypothesis holds.
    """

    criterion: str
    outcome: str
    margin: Optional[Interval]
    certificate: str
    conclusion_strength: str

    def __post_init__(self) -> None:
        if self.outcome not in _OUTCOMES:
            raise ValueError(f"unknown outcome {self.outcome!r}")
        if self.conclusion_strength not in _STRENGTH_RANK:
            raise ValueError(f"unknown conclusion {self.conclusion_strength!r}")

    def holds(self) -> bool:
        return self.outcome == HOLDS


def _family(p: PairPotential) -> str:
    """Closed-form family tag: finite, exponential, power_summable/critical/heavy."""
    if p.is_finite_range():
        return "finite"
    c = p.coupling
    if c.kind == "exponential":
        return "exponential"
    if c.q > 2.0:
        return "power_summable"
    if c.q == 2.0:
        return "power_critical"
    return "power_heavy"


def _pad(x: float, ulps: int = 4) -> Interval:
    lo = hi = x
    for _ in range(ulps):
        lo = math.nextafter(lo, -math.inf)
        hi = math.nextafter(hi, math.inf)
    return Interval(lo, hi)


def _gamma_interval(a: float) -> Interval:
    """Enclosure of the Gamma function at a point of (0, 1].

    CPython's math.gamma is faithful to a few ulp over this range; the pad is
    generous relative to every margin the checks ever compare against it.
    """
    if not 0.0 < a <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    return _pad(math.gamma(a))


_EULER_GAMMA = _pad(float(np.euler_gamma))


# -- single-site influence ------------------------------------------------------


def check_dobrushin(p: PairPotential, rel_width: float = DEFAULT_REL_WIDTH) -> Verdict:
    """Dobrushin's one-site condition: total influence strictly below 2.

    The sum runs over both letters at the tagged site and over single flipped
    environment sites on both sides, worst case over the remaining
    environment letters (that literal reading is part of the certificate).
    For truncated couplings the mass beyond the cutoff enters as explicit
    one-sided slack: each in-range influence term moves by at most
    beta * tail under the extra field (logistic slope 1/4, field shift at
    most 2 * tail, times the 2-letter prefactor), and fully out-of-range
    flips add at most 2 * beta * tail in total.  Widening the achievable
    field set never lowers a max, so the slack is one-sided.
    """
    base = dobrushin_sum(p)
    pad = 1e-12 * max(1.0, base)
    total = Interval(max(0.0, base - pad), base + pad)
    note = "exact finite-range enumeration"
    tail = Interval.point(p.beta) * p.beyond_range_tail(rel_width)
    if tail.hi > 0.0:
        R = p.finite_range
        slack_hi = (tail * float(2 * R + 2)).hi
        total = total + Interval(0.0, slack_hi)
        note = (
            f"enumeration over the {R}-range truncation plus one-sided cutoff "
            f"slack in [0, {slack_hi:.6g}]"
        )
    margin = 2.0 - total
    if margin.lo > 0.0:
        outcome = HOLDS
    elif margin.hi <= 0.0:
        outcome = FAILS
    else:
        outcome = INCONCLUSIVE
    certificate = (
        f"one-site influence sum enclosed in [{total.lo:.10g}, {total.hi:.10g}] "
        f"against the strict threshold 2 ({note}); reading: sum over both "
        "letters at the tagged site and over single flipped sites, sup over "
        "the remaining environment"
    )
    return Verdict("dobrushin", outcome, margin, certificate, UNIQUE_GIBBS)


# -- weighted-influence series --------------------------------------------------


def _series_verdict(name: str, sv, flavor: str) -> Verdict:
    if sv.divergent:
        return Verdict(name, FAILS, None, f"{flavor} diverges: {sv.certificate}", UNIQUE_TINV_GIBBS)
    enc = sv.enclosure
    certificate = (
        f"{flavor} encloses to [{enc.lo:.10g}, {enc.hi:.10g}] ({sv.certificate}); "
        "the unique invariant state is additionally Bernoulli"
    )
    return Verdict(name, HOLDS, None, certificate, UNIQUE_TINV_GIBBS)


def check_ruelle(p: PairPotential, rel_width: float = DEFAULT_REL_WIDTH) -> Verdict:
    """Finiteness of the diameter-weighted influence over all sets through a site."""
    return _series_verdict(
        "ruelle", ruelle_sum(p, rel_width), "diameter-weighted influence series"
    )


def check_coelho_quas(p: PairPotential, rel_width: float = DEFAULT_REL_WIDTH) -> Verdict:
    """One-sided variant: sets anchored at their leftmost site."""
    return _series_verdict(
        "coelho_quas",
        coelho_quas_sum(p, rel_width),
        "anchored diameter-weighted influence series",
    )


# -- product-series divergence (Berbee) ------------------------------------------


def check_berbee(F: FSequence, rel_width: float = DEFAULT_REL_WIDTH) -> Verdict:
    """Berbee's condition: divergence of the symmetric-window product series.

    The n-th term is the product of the window inf-ratios over the first n
    windows of the alternating enumeration; see FSequence.berbee_log_rbar for
    the closed forms.  Divergence is decided structurally per family:

      * summable weighted couplings: terms decrease to the positive limit
        exp(beta * (T(1) - 4 W)), and a series with terms bounded below
        diverges;
      * quadratic power law, strength c: both parities of the 2K-th terms are
        squeezed between multiples of (K+1)^(-4c), so the series diverges
        exactly when 4c <= 1 (harmonic minorant at the boundary, p-series
        majorant above it);
      * heavier power laws: partial tail sums grow like K^(2-q), the terms
        are exp(-Theta(K^(2-q))), and the series converges by integral
        comparison.
    """
    p = F.potential
    fam = _family(p)
    if fam in ("finite", "exponential", "power_summable"):
        rs = ruelle_sum(p, rel_width)
        t1 = Interval.point(p.beta) * p.coupling_tail(1, rel_width)
        floor = (t1 - rs.enclosure * 4.0).exp()
        certificate = (
            f"product terms decrease to a limit at least {floor.lo:.10g} > 0 "
            "(exp of beta*T(1) minus four times the weighted total), so the "
            "series diverges term-by-term"
        )
        return Verdict("berbee", HOLDS, floor, certificate, UNIQUE_GIBBS)
    if fam == "power_critical":
        c = strength_fraction(p)
        margin = fraction_interval(1 - 4 * c)
        if 4 * c <= 1:
            certificate = (
                f"term bound: the (2K+1)-th product term is at least "
                f"exp(-4c(2+log 2)) * (K+1)^(-4c) with 4c = {float(4 * c):.10g} <= 1, "
                "a harmonic minorant"
            )
            return Verdict("berbee", HOLDS, margin, certificate, UNIQUE_GIBBS)
        certificate = (
            f"term bound: both parities are at most exp(c(S+2)) * (K+1)^(-4c) "
            f"with 4c = {float(4 * c):.10g} > 1, a convergent p-series majorant"
        )
        return Verdict("berbee", FAILS, margin, certificate, UNIQUE_GIBBS)
    certificate = (
        f"tails obey T(k) >= amp * k^(1-q)/(q-1) for q = {p.coupling.q:.10g} < 2, so "
        "the terms are exp(-Theta(K^(2-q))) and the series converges by "
        "integral comparison"
    )
    return Verdict("berbee", FAILS, None, certificate, UNIQUE_GIBBS)


# -- tail-variation slope ---------------------------------------------------------


def check_variation_slope(profile: VariationProfile) -> Verdict:
    """Hyperbolic-decay test: tail variation at most c/n + summable, c < 1/2.

    Holds needs both the slope enclosure strictly below 1/2 and a certified
    summable remainder; Fails needs the family's exact slope at or above 1/2.
    Anything else (unknown slope, a straddling enclosure, an upper-bound-only
    profile) stays Inconclusive.
    """
    slope = profile.slope
    if slope is None:
        return Verdict(
            "variation_slope",
            INCONCLUSIVE,
            None,
            f"profile '{profile.source}' carries no slope certificate",
            UNIQUE_GIBBS_BERNOULLI,
        )
    margin = 0.5 - slope
    detail = (
        f"tail-variation slope in [{slope.lo:.10g}, {slope.hi:.10g}] against the "
        f"strict threshold 1/2; remainder summable: {profile.remainder_summable}"
    )
    if slope.hi < 0.5 and profile.remainder_summable is True:
        return Verdict("variation_slope", HOLDS, margin, detail, UNIQUE_GIBBS_BERNOULLI)
    if slope.lo >= 0.5 and profile.exact:
        return Verdict(
            "variation_slope",
            FAILS,
            margin,
            detail + "; the slope is the family's exact value, so no smaller "
            "hyperbolic majorant exists",
            UNIQUE_GIBBS_BERNOULLI,
        )
    return Verdict("variation_slope", INCONCLUSIVE, margin, detail, UNIQUE_GIBBS_BERNOULLI)


# -- product growth with dyadic block sums ----------------------------------------


def _blocksum_alpha_ok(fam: str, q: float, alpha: Fraction) -> bool:
    """Whether dyadic block sums of (beta*T(i+1))**(2*alpha) certifiably vanish."""
    if fam in ("finite", "exponential"):
        return True  # tails vanish or decay exponentially; any alpha > 0 works
    return 2 * alpha * (Fraction(q) - 1) > 1


def check_product_blocksum(F: FSequence, alpha: Optional[float] = None) -> Verdict:
    """Paired growth test: polynomial ratio products plus vanishing block sums.

    The hypothesis pair asks for the running sup-ratio product to be
    O(n^(1-alpha)) while the dyadic block sums of the 2*alpha-th powers of the
    right-tail log-ratios vanish, for a single alpha in (0, 1].  When alpha is
    omitted the check searches DEFAULT_ALPHA_GRID, plus the family's natural
    exponent 1 - c on the critical power law.  All comparisons against the
    family closed forms are exact rational arithmetic.
    """
    if alpha is not None and not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    p = F.potential
    fam = _family(p)
    name = "product_blocksum"

    if fam == "power_heavy":
        certificate = (
            f"running log-product grows like n^(2-q) for q = {p.coupling.q:.10g} < 2 "
            "(integral comparison), so no alpha gives a polynomial product bound"
        )
        return Verdict(name, FAILS, None, certificate, UNIQUE_GIBBS_BERNOULLI)

    if fam == "power_critical":
        c = strength_fraction(p)
        margin = fraction_interval(_HALF - c)
        candidates = [Fraction(alpha)] if alpha is not None else [Fraction(a) for a in DEFAULT_ALPHA_GRID]
        if alpha is None and c < _HALF:
            natural = 1 - c
            if natural not in candidates:
                candidates.append(natural)
        admissible = [a for a in candidates if a > _HALF and c <= 1 - a]
        if admissible:
            a = max(admissible)
            certificate = (
                f"alpha = {float(a):.10g}: the log-product partial sums are "
                f"c*log n + O(1) with c = {float(c):.10g} <= 1 - alpha, and the "
                "dyadic block sums are at most c^(2a) (2^m - 1)^(1-2a)/(2a-1) -> 0 "
                "since 2*alpha > 1"
            )
            return Verdict(name, HOLDS, margin, certificate, UNIQUE_GIBBS_BERNOULLI)
        if c >= _HALF:
            certificate = (
                f"no admissible alpha: the product bound needs alpha <= 1 - c "
                f"= {float(1 - c):.10g} while the block sums need alpha > 1/2"
            )
            return Verdict(name, FAILS, margin, certificate, UNIQUE_GIBBS_BERNOULLI)
        certificate = (
            f"strength c = {float(c):.10g} < 1/2 admits alphas in (1/2, 1-c], but "
            "none of the supplied candidates lies in that window"
        )
        return Verdict(name, INCONCLUSIVE, margin, certificate, UNIQUE_GIBBS_BERNOULLI)

    # summable families: the product converges, so alpha = 1 always serves
    q = p.coupling.q if fam == "power_summable" else math.inf
    candidates = [Fraction(alpha)] if alpha is not None else [Fraction(a) for a in DEFAULT_ALPHA_GRID]
    admissible = [a for a in candidates if _blocksum_alpha_ok(fam, q, a)]
    margin = Interval.point(0.5)
    if admissible:
        a = max(admissible)
        certificate = (
            f"alpha = {float(a):.10g}: the weighted coupling total is finite, so the "
            "ratio product is bounded (O(n^0)), and the block sums decay "
            "geometrically in the block index"
        )
        return Verdict(name, HOLDS, margin, certificate, UNIQUE_GIBBS_BERNOULLI)
    certificate = (
        f"supplied alpha = {float(candidates[0]):.10g} leaves block-sum exponent "
        f"2*alpha*(q-1) = {float(2 * candidates[0] * (Fraction(q) - 1)):.10g} <= 1, "
        "so the dyadic sums do not certifiably vanish (larger alpha would work)"
    )
    return Verdict(name, INCONCLUSIVE, margin, certificate, UNIQUE_GIBBS_BERNOULLI)


# -- block sums of squared conditional-law ratios ---------------------------------


def check_jop_blocksum(logr_g: LogRProfile, lam: float = 2.0) -> Verdict:
    """Vanishing geometric-block sums of squared log-ratios of the chain law.

    Blocks are (ceil(lam^(m-1)), ceil(lam^m)]; the hypothesis holds for one
    growth factor lam > 1 exactly when it holds for every such factor, so lam
    only scales the constants quoted in the certificate.  Margins report the
    decay-exponent clearance above the critical 1/2.
    """
    if not lam > 1.0:
        raise ValueError("block growth factor must exceed 1")
    name = "jop_blocksum"
    if logr_g.zero_beyond is not None:
        certificate = (
            f"profile vanishes beyond n = {logr_g.zero_beyond}: all late blocks "
            "sum to exactly 0"
        )
        return Verdict(name, HOLDS, None, certificate, UNIQUE_TINV_GIBBS)
    if logr_g.exact_power is not None:
        c, s = logr_g.exact_power
        margin = _pad(s) - 0.5
        if c.hi == 0.0:
            return Verdict(name, HOLDS, None, "profile is identically 0", UNIQUE_TINV_GIBBS)
        if s > 0.5:
            certificate = (
                f"exact profile c*n^-s, s = {s:.10g} > 1/2: block sums are at most "
                f"c^2 * lam^((m-1)(1-2s))/(2s-1) -> 0 (lam = {lam:.10g})"
            )
            return Verdict(name, HOLDS, margin, certificate, UNIQUE_TINV_GIBBS)
        if s == 0.5:
            limit = c * c * Interval.point(lam).log()
            certificate = (
                f"exact profile c/sqrt(n): block sums converge to c^2 log lam in "
                f"[{limit.lo:.10g}, {limit.hi:.10g}], a nonzero limit"
            )
            return Verdict(name, FAILS, margin, certificate, UNIQUE_TINV_GIBBS)
        certificate = (
            f"exact profile c*n^-s with s = {s:.10g} < 1/2: block sums grow like "
            "lam^(m(1-2s)) and diverge"
        )
        return Verdict(name, FAILS, None, certificate, UNIQUE_TINV_GIBBS)
    env = logr_g.envelope
    if env is not None and env.exponent > 0.5:
        margin = _pad(env.exponent) - 0.5
        certificate = (
            f"certified majorant {env.coefficient:.10g} * n^-{env.exponent:.10g} "
            f"({env.derivation}); squared block sums vanish since the exponent "
            "exceeds 1/2"
        )
        return Verdict(name, HOLDS, margin, certificate, UNIQUE_TINV_GIBBS)
    certificate = (
        f"profile '{logr_g.source}' has no closed form with decay exponent above "
        "1/2; block partial sums alone cannot certify a limit"
    )
    return Verdict(name, INCONCLUSIVE, None, certificate, UNIQUE_TINV_GIBBS)


def check_bcjo(logr_g: LogRProfile) -> Verdict:
    """Square-root-scaled variation test: limsup sqrt(n) * logr(n) below 2."""
    name = "bcjo"
    if logr_g.zero_beyond is not None:
        certificate = (
            f"profile vanishes beyond n = {logr_g.zero_beyond}; the scaled limsup is 0"
        )
        return Verdict(name, HOLDS, Interval.point(2.0), certificate, UNIQUE_TINV_GIBBS)
    if logr_g.exact_power is not None:
        c, s = logr_g.exact_power
        if c.hi == 0.0 or s > 0.5:
            certificate = (
                f"exact profile c*n^-s with s = {s:.10g} > 1/2 (or c = 0): "
                "sqrt(n)*profile -> 0, strictly below 2"
            )
            return Verdict(name, HOLDS, Interval.point(2.0), certificate, UNIQUE_TINV_GIBBS)
        if s == 0.5:
            margin = 2.0 - c
            detail = (
                f"exact profile c/sqrt(n): the scaled limsup equals c in "
                f"[{c.lo:.10g}, {c.hi:.10g}] against the strict threshold 2"
            )
            if c.hi < 2.0:
                return Verdict(name, HOLDS, margin, detail, UNIQUE_TINV_GIBBS)
            if c.lo >= 2.0:
                return Verdict(name, FAILS, margin, detail, UNIQUE_TINV_GIBBS)
            return Verdict(name, INCONCLUSIVE, margin, detail, UNIQUE_TINV_GIBBS)
        certificate = (
            f"exact profile c*n^-s with s = {s:.10g} < 1/2 and c > 0: the scaled "
            "limsup is infinite"
        )
        return Verdict(name, FAILS, None, certificate, UNIQUE_TINV_GIBBS)
    env = logr_g.envelope
    if env is not None:
        if env.exponent > 0.5:
            certificate = (
                f"certified majorant {env.coefficient:.10g} * n^-{env.exponent:.10g} "
                f"({env.derivation}); the scaled limsup is 0"
            )
            return Verdict(name, HOLDS, Interval.point(2.0), certificate, UNIQUE_TINV_GIBBS)
        if env.exponent == 0.5 and env.coefficient < 2.0:
            margin = Interval(
                (2.0 - Interval.point(env.coefficient)).lo, 2.0
            )
            certificate = (
                f"certified majorant {env.coefficient:.10g}/sqrt(n) "
                f"({env.derivation}); the scaled limsup is at most the coefficient"
            )
            return Verdict(name, HOLDS, margin, certificate, UNIQUE_TINV_GIBBS)
    certificate = (
        f"profile '{logr_g.source}' carries no majorant with exponent >= 1/2 and "
        "coefficient below 2; the scaled limsup is not certified"
    )
    return Verdict(name, INCONCLUSIVE, None, certificate, UNIQUE_TINV_GIBBS)


# -- scaled limsup with an explicit (alpha, K) budget ------------------------------


@dataclass(frozen=True)
class _Limsup:
    """Certified limsup of one scaled sequence.

    Exactly one of three states: a finite enclosure, infinity, or unknown
    (the scaling exponent's sign is not certified inside the strength
    enclosure, which can only happen for a strength interval of positive
    width sitting on the critical exponent).
    """

    value: Optional[Interval]
    infinite: bool = False

    @staticmethod
    def finite(v: Interval) -> "_Limsup":
        return _Limsup(value=v)

    @staticmethod
    def inf() -> "_Limsup":
        return _Limsup(value=None, infinite=True)

    @staticmethod
    def unknown() -> "_Limsup":
        return _Limsup(value=None, infinite=False)


def _critical_product_limsup(c: Interval, extra_one: bool) -> Interval:
    """limsup n^(-c) * exp(partial sums) for hyperbolic-type tail profiles.

    Partial sums equal c*H_n plus, for the quadratic power family, a window
    term increasing to c; both pieces converge, so the limsup is the limit
    exp(c*gamma) or exp(c*(gamma + 1)).
    """
    shift = _EULER_GAMMA + 1.0 if extra_one else _EULER_GAMMA
    return (c * shift).exp()


class _ScaledFamily:
    """Closed-form limsups for one input family of the scaled-limsup check.

    The tail strength is carried as exact rational bounds [c_lo, c_hi]; every
    exponent-sign decision is certified against the appropriate endpoint, and
    a decision that would need the two endpoints to disagree comes back
    unknown instead of guessing.
    """

    def __init__(self, kind: str, c_lo: Optional[Fraction] = None,
                 c_hi: Optional[Fraction] = None, q: Optional[float] = None,
                 prod_cap: Optional[Interval] = None,
                 tail_amp: Optional[Interval] = None):
        self.kind = kind  # "critical", "hyperbolic", "summable", "heavy"
        self.c_lo = c_lo
        self.c_hi = c_hi
        self.q = q
        self.prod_cap = prod_cap
        self.tail_amp = tail_amp

    @property
    def c_interval(self) -> Interval:
        return Interval.hull(fraction_interval(self.c_lo), fraction_interval(self.c_hi))

    def product_limsup(self, alpha: Fraction) -> _Limsup:
        """limsup of n^(alpha-1) times the running sup-ratio product."""
        if self.kind == "summable":
            if alpha < 1:
                return _Limsup.finite(ZERO)
            return _Limsup.finite(self.prod_cap)
        if alpha - 1 + self.c_hi < 0:
            return _Limsup.finite(ZERO)
        if alpha - 1 + self.c_lo > 0:
            return _Limsup.inf()
        if self.c_lo == self.c_hi:
            return _Limsup.finite(
                _critical_product_limsup(self.c_interval, self.kind == "critical")
            )
        return _Limsup.unknown()

    def tail_limsup(self, alpha: Fraction) -> _Limsup:
        """limsup of sqrt(n) times the alpha-th power of the right-tail log-ratio."""
        if self.kind in ("critical", "hyperbolic"):
            if alpha > _HALF:
                return _Limsup.finite(ZERO)
            if alpha < _HALF:
                return _Limsup.inf()
            return _Limsup.finite(self.c_interval.sqrt())
        if self.q is None:
            return _Limsup.finite(ZERO)  # finite range or exponential tails
        edge = _HALF - alpha * (Fraction(self.q) - 1)
        if edge < 0:
            return _Limsup.finite(ZERO)
        if edge > 0:
            return _Limsup.inf()
        return _Limsup.finite(self.tail_amp.pow(float(alpha)))


def _scaled_family(source: Union[FSequence, VariationProfile],
                   rel_width: float) -> Optional[_ScaledFamily]:
    if isinstance(source, VariationProfile):
        if source.form == "hyperbolic" and source.slope is not None:
            coeff = source.slope
            return _ScaledFamily(
                "hyperbolic", c_lo=Fraction(coeff.lo), c_hi=Fraction(coeff.hi)
            )
        return None
    p = source.potential
    fam = _family(p)
    if fam == "power_critical":
        c = strength_fraction(p)
        return _ScaledFamily("critical", c_lo=c, c_hi=c)
    if fam == "power_heavy":
        return _ScaledFamily("heavy")
    rs = ruelle_sum(p, rel_width)
    cap = rs.enclosure.exp()
    if fam == "power_summable":
        cc = p.coupling
        amp = Interval.point(p.beta) * Interval.point(cc.amplitude) / (cc.q - 1.0)
        return _ScaledFamily("summable", q=cc.q, prod_cap=cap, tail_amp=amp)
    return _ScaledFamily("summable", prod_cap=cap)


def check_scaled_limsup(
    source: Union[FSequence, VariationProfile],
    alpha: Optional[float] = None,
    K: Optional[float] = None,
    rel_width: float = DEFAULT_REL_WIDTH,
) -> Verdict:
    """Scaled-limsup test: sqrt(n) * tail^alpha strictly below Gamma(alpha)/K.

    The budget pair works as follows: K must dominate the limsup of
    n^(alpha-1) times the running ratio product, and then the scaled tail
    limsup must fall strictly below Gamma(alpha)/K.  With no pair supplied
    the check picks the family's natural alpha (any exponent in
    (1/2, 1 - c) when the strength c is below 1/2, the critical alpha = 1 - c
    at the boundary, alpha = 1 for summable couplings) and the smallest
    certified K.  Both strict inequalities are evaluated on enclosures;
    an enclosure straddling equality yields Inconclusive, never a verdict.

    Accepts an FSequence (family closed forms) or an exact hyperbolic
    VariationProfile; other profiles have no certified asymptotics and come
    back Inconclusive.  Uniqueness here is among shift-invariant states only.
    """
    name = "scaled_limsup"
    if K is not None and alpha is None:
        raise ValueError("alpha is required when K is supplied")
    if alpha is not None and not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    if K is not None and not K > 0.0:
        raise ValueError("K must be positive")

    family = _scaled_family(source, rel_width)
    if family is None:
        return Verdict(
            name,
            INCONCLUSIVE,
            None,
            "input carries no closed-form asymptotics (only exact power-law, "
            "exponential, finite-range, and hyperbolic-profile inputs are "
            "certified)",
            UNIQUE_TINV_GIBBS,
        )
    if family.kind == "heavy":
        certificate = (
            "running log-product grows polynomially fast in n^(2-q) for q < 2, "
            "so n^(alpha-1) times the product is unbounded for every alpha"
        )
        return Verdict(name, FAILS, None, certificate, UNIQUE_TINV_GIBBS)

    if alpha is None:
        a, picked = _natural_alpha(family)
        if a is None:
            return picked
    else:
        a, picked = Fraction(alpha), None

    prod = family.product_limsup(a)
    if prod.infinite:
        certificate = (
            f"alpha = {float(a):.10g} exceeds the family's product exponent "
            "budget: n^(alpha-1) times the ratio product is unbounded, so no "
            "K satisfies the product cap"
        )
        return Verdict(name, FAILS, None, certificate, UNIQUE_TINV_GIBBS)
    if prod.value is None:
        return Verdict(
            name,
            INCONCLUSIVE,
            None,
            "the product-limsup exponent sign is not certified at this alpha "
            "(the strength enclosure sits on the critical exponent)",
            UNIQUE_TINV_GIBBS,
        )
    if K is None:
        cap = max(prod.value.hi, 1.0)
        k_note = f"K = {cap:.10g} (the certified product limsup)"
    else:
        cap = K
        if prod.value.lo > K:
            certificate = (
                f"supplied K = {K:.10g} lies below the certified product limsup "
                f"[{prod.value.lo:.10g}, {prod.value.hi:.10g}]"
            )
            return Verdict(name, FAILS, None, certificate, UNIQUE_TINV_GIBBS)
        if prod.value.hi > K:
            certificate = (
                f"the product-limsup enclosure [{prod.value.lo:.10g}, "
                f"{prod.value.hi:.10g}] straddles the supplied K = {K:.10g}"
            )
            return Verdict(name, INCONCLUSIVE, None, certificate, UNIQUE_TINV_GIBBS)
        k_note = f"K = {K:.10g} (supplied, dominates the product limsup)"

    tail = family.tail_limsup(a)
    if tail.infinite:
        certificate = (
            f"alpha = {float(a):.10g} sits below the tail's critical exponent: "
            "the scaled tail limsup is infinite"
        )
        return Verdict(name, FAILS, None, certificate, UNIQUE_TINV_GIBBS)
    rhs = _gamma_interval(float(a)) / Interval.point(cap)
    margin = rhs - tail.value
    detail = (
        f"alpha = {float(a):.10g}, {k_note}; scaled tail limsup in "
        f"[{tail.value.lo:.10g}, {tail.value.hi:.10g}] against "
        f"Gamma(alpha)/K in [{rhs.lo:.10g}, {rhs.hi:.10g}] (strict); "
        "uniqueness is among shift-invariant states"
    )
    if margin.lo > 0.0:
        return Verdict(name, HOLDS, margin, detail, UNIQUE_TINV_GIBBS)
    if margin.hi <= 0.0:
        return Verdict(name, FAILS, margin, detail, UNIQUE_TINV_GIBBS)
    return Verdict(
        name,
        INCONCLUSIVE,
        margin,
        detail + "; the enclosures straddle equality",
        UNIQUE_TINV_GIBBS,
    )


def _natural_alpha(family: _ScaledFamily):
    """The family's own alpha when none is supplied, or a terminal verdict."""
    if family.kind == "summable":
        return Fraction(1), None
    if family.c_hi < _HALF:
        # any exponent strictly between 1/2 and 1 - c gives zero limsups
        return (_HALF + (1 - family.c_hi)) / 2, None
    if family.c_lo == family.c_hi == _HALF:
        return _HALF, None
    if family.c_lo > _HALF:
        certificate = (
            f"strength c = {float(family.c_lo):.10g} > 1/2: alphas above 1 - c "
            "blow up the product limsup and alphas at or below 1/2 >= 1 - c blow "
            "up the tail limsup, so no budget pair exists"
        )
        return None, Verdict("scaled_limsup", FAILS, None, certificate, UNIQUE_TINV_GIBBS)
    certificate = (
        f"strength enclosure [{float(family.c_lo):.10g}, {float(family.c_hi):.10g}] "
        "straddles the critical value 1/2, so no alpha is certified either way"
    )
    return None, Verdict(
        "scaled_limsup", INCONCLUSIVE, None, certificate, UNIQUE_TINV_GIBBS
    )


# -- aggregation -------------------------------------------------------------------


@dataclass(frozen=True)
class CriteriaReport:
    """All verdicts for one coupling, with the strongest certified conclusion."""

    verdicts: tuple

    @property
    def strongest(self) -> Optional[str]:
        best: Optional[str] = None
        for v in self.verdicts:
            if v.outcome == HOLDS:
                if best is None or _STRENGTH_RANK[v.conclusion_strength] > _STRENGTH_RANK[best]:
                    best = v.conclusion_strength
        return best

    def by_name(self, criterion: str) -> Verdict:
        for v in self.verdicts:
            if v.criterion == criterion:
                return v
        raise KeyError(criterion)

    def outcomes(self) -> dict:
        return {v.criterion: v.outcome for v in self.verdicts}


def _guarded(criterion: str, strength: str, thunk: Callable[[], Verdict]) -> Verdict:
    try:
        return thunk()
    except ValueError as exc:
        return Verdict(criterion, INCONCLUSIVE, None, f"not evaluated: {exc}", strength)


def evaluate_all(p: PairPotential, rel_width: float = DEFAULT_REL_WIDTH) -> CriteriaReport:
    """Run every criterion on one pair coupling.

    Checks whose preconditions a given coupling cannot meet (for example the
    one-site influence sum on an untruncated infinite-range law) report as
    Inconclusive entries carrying the guard message, so the report always has
    one entry per criterion.
    """
    F = FSequence.from_potential(p, rel_width)
    profile = VariationProfile.from_potential(p, rel_width)
    logr = LogRProfile.from_fsequence(F, rel_width)
    verdicts = (
        _guarded("dobrushin", UNIQUE_GIBBS, lambda: check_dobrushin(p, rel_width)),
        _guarded("ruelle", UNIQUE_TINV_GIBBS, lambda: check_ruelle(p, rel_width)),
        _guarded(
            "coelho_quas", UNIQUE_TINV_GIBBS, lambda: check_coelho_quas(p, rel_width)
        ),
        _guarded("berbee", UNIQUE_GIBBS, lambda: check_berbee(F, rel_width)),
        _guarded(
            "variation_slope",
            UNIQUE_GIBBS_BERNOULLI,
            lambda: check_variation_slope(profile),
        ),
        _guarded(
            "product_blocksum",
            UNIQUE_GIBBS_BERNOULLI,
            lambda: check_product_blocksum(F),
        ),
        _guarded("jop_blocksum", UNIQUE_TINV_GIBBS, lambda: check_jop_blocksum(logr)),
        _guarded("bcjo", UNIQUE_TINV_GIBBS, lambda: check_bcjo(logr)),
        _guarded(
            "scaled_limsup",
            UNIQUE_TINV_GIBBS,
            lambda: check_scaled_limsup(F, rel_width=rel_width),
        ),
    )
    return CriteriaReport(verdicts=verdicts)
