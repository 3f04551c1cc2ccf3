"""Closed-form bound curves, optimal exponent selection, and per-experiment
comparison reports.

Names follow the report columns: ``weil`` is the square-root bound for the
complete sum, ``thm1`` the incomplete-sum bound family indexed by an integer
r >= 2, ``prop1`` the windowed mean-value family, and ``conj1`` the
conjectural square-root curve, which is only ever reported, never asserted.
All logarithms are natural.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .arith import coprime_count, divisor_count, gcd3
from .errors import IntervalLengthWarning, InvalidR
from .expsum import IntervalSpec, SumParams


def weil_bound(a: int, b: int, c: int) -> float:
    """sqrt(c) * sqrt(gcd(a,b,c)) * tau(c)."""
    if c < 2:
        raise ValueError(f"modulus must be >= 2, got {c}")
    return math.sqrt(c) * math.sqrt(gcd3(a, b, c)) * divisor_count(c)


def thm1_bound(length: int, p: int, r: int) -> float:
    """L^{1/r} * p^{1/2 - (3r-1)/(4r^2)} * ln p, for integer r >= 2.

    r = 1 would be weaker than the trivial bound and is rejected.
    """
    if r < 2:
        raise InvalidR(f"r must be >= 2, got {r}")
    if p < 3:
        raise ValueError(f"p must be >= 3, got {p}")
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    return length ** (1.0 / r) * p ** (0.5 - (3 * r - 1) / (4.0 * r * r)) * math.log(p)


def prop1_bound(y: float, p: int, r: int) -> float:
    """y^{1-1/r} * p^{1/2 + (r+1)/(4r^2)} * ln p, for integer r >= 2."""
    if r < 2:
        raise InvalidR(f"r must be >= 2, got {r}")
    if p < 3:
        raise ValueError(f"p must be >= 3, got {p}")
    if y <= 0:
        raise ValueError(f"window width must be positive, got {y}")
    return y ** (1.0 - 1.0 / r) * p ** (0.5 + (r + 1) / (4.0 * r * r)) * math.log(p)


def conjecture_bound(length: int, gcd_abc: int, epsilon: float = 0.0) -> float:
    """L^{1/2+epsilon} * sqrt(gcd): conjectural reference curve only."""
    return length ** (0.5 + epsilon) * math.sqrt(gcd_abc)


def best_r(length: int, p: int, r_max: int) -> tuple[int, float]:
    """Scan r in [2, r_max]; return the minimizing (r, bound), smallest r
    on ties."""
    if r_max < 2:
        raise InvalidR(f"r_max must be >= 2, got {r_max}")
    winner, best = 2, thm1_bound(length, p, 2)
    for r in range(3, r_max + 1):
        val = thm1_bound(length, p, r)
        if val < best:
            winner, best = r, val
    return winner, best


def nontrivial_threshold(r: int) -> float:
    """theta(r) = (r/(r-1)) * (1/2 - (3r-1)/(4r^2)).

    Ignoring the log factor, the r-th bound curve drops below the trivial
    bound L once L > p^theta(r); theta(2) = 3/8 is the widest range.
    """
    if r < 2:
        raise InvalidR(f"r must be >= 2, got {r}")
    return (r / (r - 1.0)) * (0.5 - (3 * r - 1) / (4.0 * r * r))


@dataclass(frozen=True)
class BoundReport:
    """Every bound value and ratio for one evaluated sum.

    trivial is the interval's unit count (the triangle-inequality bound);
    weil_completed is the full-modulus completion curve
    tau(c) sqrt(c) (1+ln c) sqrt(gcd); thm1 maps each r to its bound and
    best_r/best_thm1 record the minimum.  conj1 is reference-only, with
    conj_in_range flagging whether the length sits in (c^{1/4}, c).
    """

    params: SumParams
    interval: IntervalSpec
    abs_sum: float
    trivial: int
    weil: float
    weil_completed: float
    thm1: dict[int, float]
    best_r: int
    best_thm1: float
    conj1: float
    conj_in_range: bool
    ratio_weil: float
    ratio_thm1: float
    ratio_conj: float


def make_report(params: SumParams, interval: IntervalSpec, abs_sum: float,
                r_max: int = 10, epsilon: float = 0.0) -> BoundReport:
    """Fill a BoundReport for one evaluated |S|.

    Lengths outside [1, c] only warn; the bound formulas are then evaluated
    at length clamped to >= 1.
    """
    if abs_sum < 0:
        raise ValueError(f"abs_sum must be >= 0, got {abs_sum}")
    c = params.c.c
    length = interval.length
    if not 1 <= length <= c:
        warnings.warn(
            f"interval length {length} outside [1, {c}]", IntervalLengthWarning,
            stacklevel=2,
        )
    length_eff = max(length, 1)
    g = gcd3(params.a, params.b, c)
    trivial = coprime_count(interval.start, length, c)
    weil = weil_bound(params.a, params.b, c)
    weil_completed = divisor_count(c) * math.sqrt(c) * (1.0 + math.log(c)) * math.sqrt(g)
    thm1 = {r: thm1_bound(length_eff, c, r) for r in range(2, r_max + 1)}
    r_star, best = best_r(length_eff, c, r_max)
    conj1 = conjecture_bound(length_eff, g, epsilon)
    return BoundReport(
        params=params,
        interval=interval,
        abs_sum=abs_sum,
        trivial=trivial,
        weil=weil,
        weil_completed=weil_completed,
        thm1=thm1,
        best_r=r_star,
        best_thm1=best,
        conj1=conj1,
        conj_in_range=c**0.25 < length < c,
        ratio_weil=abs_sum / weil if abs_sum else 0.0,
        ratio_thm1=abs_sum / best if abs_sum else 0.0,
        ratio_conj=abs_sum / conj1 if abs_sum else 0.0,
    )
