"""Reference-grade evaluation of complete and incomplete Kloosterman sums.

The complete sum at modulus c is sum over units x mod c of
e((a*x + b*xbar)/c), with x*xbar = 1 (mod c) and e(z) = exp(2*pi*i*z);
the incomplete variant restricts x to the integers in an interval
(start, start+length], silently skipping x that share a factor with c.

Evaluation is direct: phase residues are reduced exactly in integer
arithmetic, each term costs one complex exponential, and accumulation is
exact (Shewchuk summation via math.fsum).  These evaluators are the
ground truth the fast spectral path is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import INT64_PHASE_LIMIT, Modulus, batch_inverse, inverse_table, mod_inverse
from .errors import IntervalTooLong


@dataclass(frozen=True)
class SumParams:
    """One sum: frequency pair (a, b) and the modulus.

    a and b are stored as given; evaluation only ever sees them mod c.
    """

    a: int
    b: int
    c: Modulus


@dataclass(frozen=True)
class IntervalSpec:
    """Half-open integer interval (start, start+length]."""

    start: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError(f"interval length must be >= 0, got {self.length}")


@dataclass(frozen=True)
class SumValue:
    """A evaluated sum: real/imaginary parts plus the number of terms."""

    re: float
    im: float
    term_count: int

    @property
    def abs(self) -> float:
        return math.hypot(self.re, self.im)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


def _accumulate(z: np.ndarray, count: int) -> SumValue:
    return SumValue(math.fsum(z.real), math.fsum(z.imag), count)


def complete_kloosterman(params: SumParams) -> SumValue:
    """Direct O(c) evaluation over all units mod c.

    term_count comes back as the totient of c.  The imaginary part is zero
    up to rounding: x -> -x conjugates the summand.
    """
    c = params.c.c
    a, b = params.a % c, params.b % c
    if params.c.is_prime and c < INT64_PHASE_LIMIT:
        inv = inverse_table(c)
        x = np.arange(1, c, dtype=np.int64)
        k = (a * x + b * inv[1:]) % c
        t = k / c
    elif c < INT64_PHASE_LIMIT:
        x = np.arange(1, c, dtype=np.int64)
        x = x[np.gcd(x, c) == 1]
        inv = np.array(batch_inverse(x.tolist(), params.c), dtype=np.int64)
        k = (a * x + b * inv) % c
        t = k / c
    else:
        units = [x for x in range(1, c) if math.gcd(x, c) == 1]
        invs = batch_inverse(units, params.c)
        t = np.array([((a * x + b * v) % c) / c for x, v in zip(units, invs)])
    z = np.exp(2j * np.pi * t)
    return _accumulate(z, t.size)


def incomplete_kloosterman(params: SumParams, interval: IntervalSpec) -> SumValue:
    """Sum over the integers in (start, start+length], O(length).

    Inverses come from one batched inversion of the coprime subsequence;
    x with gcd(x, c) > 1 are skipped, never an error.
    """
    c = params.c.c
    a, b = params.a % c, params.b % c
    if interval.length == 0:
        return SumValue(0.0, 0.0, 0)
    if c < INT64_PHASE_LIMIT:
        r = (np.arange(interval.length, dtype=np.int64) + (interval.start + 1) % c) % c
        r = r[r != 0] if params.c.is_prime else r[np.gcd(r, c) == 1]
        if params.c.is_prime:
            inv = inverse_table(c)[r]
        else:
            inv = np.array(batch_inverse(r.tolist(), params.c), dtype=np.int64)
        k = (a * r + b * inv) % c
        t = k / c
    else:
        rs = [x % c for x in range(interval.start + 1, interval.start + interval.length + 1)]
        rs = [r for r in rs if math.gcd(r, c) == 1]
        invs = batch_inverse(rs, params.c)
        t = np.array([((a * r + b * v) % c) / c for r, v in zip(rs, invs)])
    z = np.exp(2j * np.pi * t)
    return _accumulate(z, t.size)


def lemma2_transform(b: int, m: int, p: Modulus, spectrum=None):
    """Twisted average of all complete sums against its closed form.

    lhs = sum over a mod p of S(a,b;p) e(m a/p), computed from the full
    spectrum; rhs = p e(-b*mbar/p) when gcd(m,p)=1 and 0 when p | m.
    Returns (lhs, rhs, max_abs_diff).  A precomputed spectrum for (b, p)
    may be passed to amortize the transform across many m.
    """
    if not p.is_prime:
        raise ValueError(f"modulus {p.c} is not prime")
    from .spectral import all_complete_sums

    if spectrum is None:
        spectrum = all_complete_sums(b, p)
    _require_complete_spectrum(spectrum, b, p)
    pp = p.c
    aa = np.arange(pp, dtype=np.int64)
    phases = np.exp(2j * np.pi * ((m % pp) * aa % pp) / pp)
    lhs = complex(np.dot(spectrum.values, phases))
    if m % pp == 0:
        rhs = 0j
    else:
        mbar = mod_inverse(m, p)
        rhs = pp * complex(np.exp(2j * np.pi * ((-b * mbar) % pp) / pp))
    diff = abs(lhs - rhs)
    return SumValue(lhs.real, lhs.imag, pp), SumValue(rhs.real, rhs.imag, pp), diff


def second_moment_complete(b: int, p: Modulus) -> float:
    """sum over a mod p of |S(a,b;p)|^2; equals p(p-1) for prime p."""
    if not p.is_prime:
        raise ValueError(f"modulus {p.c} is not prime")
    from .spectral import all_complete_sums

    v = all_complete_sums(b, p).values
    return float(np.real(np.vdot(v, v)))


def second_moment_incomplete(b: int, p: Modulus, interval: IntervalSpec):
    """((1/p) sum_a |S(a,b;p,I)|^2, number of units in the interval).

    The two agree exactly (up to rounding) whenever length <= p; longer
    intervals collide residues and are refused.
    """
    if not p.is_prime:
        raise ValueError(f"modulus {p.c} is not prime")
    if interval.length > p.c:
        raise IntervalTooLong(
            f"length {interval.length} exceeds modulus {p.c}; the moment "
            "identity does not hold"
        )
    from .spectral import all_incomplete_sums

    v = all_incomplete_sums(b, p, interval).values
    value = float(np.real(np.vdot(v, v))) / p.c
    lo, hi = interval.start, interval.start + interval.length
    units = interval.length - (hi // p.c - lo // p.c)
    return value, units


def _require_complete_spectrum(spectrum, b: int, p: Modulus) -> None:
    if spectrum.kind != "complete" or spectrum.p.c != p.c or (spectrum.b - b) % p.c != 0:
        raise ValueError("spectrum does not match (b, p) or is not complete")
