"""All p Kloosterman sums for a fixed second frequency in O(p log p).

The map a -> S(a,b;p) is the length-p discrete Fourier transform of the
vector x -> e(b*xbar/p) (zero at x = 0), so one prime-length DFT yields
the whole family at once.  Arbitrary lengths go through a Bluestein chirp
factorization into power-of-two FFTs; plans are cached per length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .arith import Modulus, inverse_table, mod_inverse
from .errors import IntervalTooLong, SizeOverflow
from .expsum import IntervalSpec, SumValue

MAX_LENGTH = 1 << 28


@dataclass(frozen=True)
class SpectrumVector:
    """The family {S(a,b;p)} indexed by a in [0, p-1].

    kind is "complete" or "incomplete"; incomplete spectra carry the
    interval they were built from.  values is read-only once built.
    """

    p: Modulus
    b: int
    values: np.ndarray
    kind: str
    interval: Optional[IntervalSpec] = None


@lru_cache(maxsize=32)
def _bluestein_plan(n: int, sign: int):
    # chirp(j) = e(sign * j^2 / (2n)); j^2 is reduced mod 2n exactly in
    # int64 (j < 2^28 keeps j^2 under 2^56) before the trig call.
    m = 1 << max(2 * n - 1, 1).bit_length() if n > 1 else 1
    if n == 1:
        chirp = np.ones(1, dtype=complex)
        kernel_fft = np.ones(1, dtype=complex)
    else:
        j = np.arange(n, dtype=np.int64)
        q = (j * j) % (2 * n)
        chirp = np.exp((sign * 1j * np.pi / n) * q)
        kernel = np.zeros(m, dtype=complex)
        kernel[:n] = np.conj(chirp)
        kernel[m - n + 1 :] = np.conj(chirp[1:])[::-1]
        kernel_fft = np.fft.fft(kernel)
    chirp.flags.writeable = False
    kernel_fft.flags.writeable = False
    return chirp, kernel_fft, m


def dft(v, direction: str = "forward") -> np.ndarray:
    """X[k] = sum_j v[j] e(+-jk/n): forward uses e(jk/n), inverse e(-jk/n).

    No 1/n normalization, so forward followed by inverse scales by n.
    Any length n >= 1 is accepted up to MAX_LENGTH (SizeOverflow beyond:
    the padded convolution would not fit).
    """
    x = np.asarray(v, dtype=complex)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("dft expects a nonempty 1-d sequence")
    n = x.size
    if n > MAX_LENGTH:
        raise SizeOverflow(f"length {n} exceeds capacity {MAX_LENGTH}")
    if direction == "forward":
        sign = 1
    elif direction == "inverse":
        sign = -1
    else:
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    chirp, kernel_fft, m = _bluestein_plan(n, sign)
    a = np.zeros(m, dtype=complex)
    a[:n] = x * chirp
    conv = np.fft.ifft(np.fft.fft(a) * kernel_fft)[:n]
    return chirp * conv


def all_complete_sums(b: int, p: Modulus) -> SpectrumVector:
    """values[a] = S(a,b;p) for every a, via one forward DFT."""
    if not p.is_prime:
        raise ValueError(f"modulus {p.c} is not prime")
    pp = p.c
    inv = inverse_table(pp)
    w = np.zeros(pp, dtype=complex)
    w[1:] = np.exp(2j * np.pi * ((b % pp) * inv[1:] % pp) / pp)
    values = dft(w, "forward")
    values.flags.writeable = False
    return SpectrumVector(p=p, b=b, values=values, kind="complete")


def all_incomplete_sums(b: int, p: Modulus, interval: IntervalSpec) -> SpectrumVector:
    """values[a] = S(a,b;p,I) for every a; interval length must be <= p."""
    if not p.is_prime:
        raise ValueError(f"modulus {p.c} is not prime")
    pp = p.c
    if interval.length > pp:
        raise IntervalTooLong(
            f"length {interval.length} exceeds modulus {pp}: interval elements "
            "would collide in one residue slot"
        )
    inv = inverse_table(pp)
    r = (np.arange(interval.length, dtype=np.int64) + (interval.start + 1) % pp) % pp
    r = r[r != 0]
    w = np.zeros(pp, dtype=complex)
    w[r] = np.exp(2j * np.pi * ((b % pp) * inv[r] % pp) / pp)
    values = dft(w, "forward")
    values.flags.writeable = False
    return SpectrumVector(p=p, b=b, values=values, kind="incomplete", interval=interval)


def windowed_mean_value(
    b: int, p: Modulus, m: int, x: float, y: float, spectrum: SpectrumVector
) -> SumValue:
    """sum over integers a in (x, x+y] of S(a,b;p) e(m a/p).

    Periodicity in a splits the window into whole periods, whose
    contribution has the closed form p*e(-b*mbar/p) (zero when p | m),
    plus a remainder of fewer than p explicit terms -- O(min(y, p) + 1).
    """
    if spectrum.kind != "complete" or spectrum.p.c != p.c or (spectrum.b - b) % p.c != 0:
        raise ValueError("spectrum must be the complete kind for (b, p)")
    if y <= 0:
        raise ValueError(f"window width must be positive, got {y}")
    pp = p.c
    lo = math.floor(x) + 1
    hi = math.floor(x + y)
    count = hi - lo + 1
    if count <= 0:
        return SumValue(0.0, 0.0, 0)
    full, rem = divmod(count, pp)
    total = 0j
    if full:
        if m % pp == 0:
            period = 0j
        else:
            mbar = mod_inverse(m, p)
            period = pp * complex(np.exp(2j * np.pi * ((-b * mbar) % pp) / pp))
        total += full * period
    if rem:
        a0 = hi - rem + 1
        idx = (np.arange(rem, dtype=np.int64) + a0 % pp) % pp
        phases = np.exp(2j * np.pi * ((m % pp) * idx % pp) / pp)
        total += complex(np.dot(spectrum.values[idx], phases))
    return SumValue(total.real, total.imag, count)
