"""Exact integer and modular arithmetic primitives.

Everything works on plain Python integers, so intermediate products never
overflow and moduli up to 64 bits need no special casing.  The one numpy
surface is :func:`inverse_table`, which feeds the vectorized evaluators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import NonInvertible

# Deterministic Miller-Rabin witness tiers (Jaeschke-style).  The final set
# decides primality correctly for every n < 3.3e24, covering 64-bit inputs.
_MR_TIERS = (
    (2047, (2,)),
    (1373653, (2, 3)),
    (25326001, (2, 3, 5)),
    (3215031751, (2, 3, 5, 7)),
    (341550071728321, (2, 3, 5, 7, 11, 13, 17)),
    (None, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

DIVISOR_COUNT_LIMIT = 10**12

# phase products a*x + b*inv stay exact in int64 for moduli below this;
# larger moduli fall back to exact Python-int arithmetic
INT64_PHASE_LIMIT = 1 << 31


def is_prime(n: int) -> bool:
    """Deterministic primality test, exact for all 64-bit inputs."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for limit, bases in _MR_TIERS:
        if limit is None or n < limit:
            witnesses = bases
            break
    for a in witnesses:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    """All primes <= n via a byte sieve."""
    if n < 2:
        return []
    sieve = bytearray(b"\x01") * (n + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            start = p * p
            sieve[start::p] = b"\x00" * ((n - start) // p + 1)
    return [i for i, flag in enumerate(sieve) if flag]


def next_prime_at_least(n: int) -> int:
    """Smallest prime >= n."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def prev_prime_at_most(n: int) -> int:
    """Largest prime <= n; raises for n < 2."""
    if n < 2:
        raise ValueError(f"no prime <= {n}")
    while not is_prime(n):
        n -= 1
    return n


@dataclass(frozen=True)
class Modulus:
    """A modulus c >= 2 whose primality is decided once, at construction."""

    c: int
    is_prime: bool = field(init=False)

    def __post_init__(self):
        if self.c < 2:
            raise ValueError(f"modulus must be >= 2, got {self.c}")
        object.__setattr__(self, "is_prime", is_prime(self.c))

    def __int__(self) -> int:
        return self.c


def mod_inverse(x: int, c: Modulus) -> int:
    """Inverse of x modulo c, reduced to [1, c-1].

    Negative and out-of-range x are reduced first.  Raises
    :class:`NonInvertible` when gcd(x, c) != 1.
    """
    m = c.c
    xr = x % m
    g = math.gcd(xr, m)
    if g != 1:
        raise NonInvertible(f"{x} has no inverse mod {m} (gcd {g})")
    return pow(xr, -1, m)


def batch_inverse(xs: Sequence[int], c: Modulus) -> list[int]:
    """Inverses of a whole sequence using a single modular inversion.

    Prefix products reduce the job to inverting one residue; walking the
    products back recovers every elementwise inverse in O(len) multiplies.
    Raises :class:`NonInvertible` naming the first offending index when
    some element shares a factor with c.
    """
    m = c.c
    rs = [x % m for x in xs]
    if not rs:
        return []
    prefix = []
    acc = 1
    for r in rs:
        acc = acc * r % m
        prefix.append(acc)
    if math.gcd(acc, m) != 1:
        for i, r in enumerate(rs):
            if math.gcd(r, m) != 1:
                raise NonInvertible(
                    f"element {xs[i]} at index {i} has no inverse mod {m}", index=i
                )
    inv_acc = pow(acc, -1, m)
    out = [0] * len(rs)
    for i in range(len(rs) - 1, 0, -1):
        out[i] = prefix[i - 1] * inv_acc % m
        inv_acc = inv_acc * rs[i] % m
    out[0] = inv_acc
    return out


@lru_cache(maxsize=16)
def inverse_table(p: int) -> np.ndarray:
    """inv[x] = x^{-1} mod p for x in [1, p-1], with inv[0] = 0; p prime.

    Linear-time recurrence; int64 storage caps p below 2^31 so downstream
    phase products a*x + b*inv stay exact in int64.
    """
    if p >= 1 << 31:
        raise ValueError("inverse_table supports p < 2^31")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    inv = [0] * p
    if p > 1:
        inv[1] = 1
    for i in range(2, p):
        inv[i] = (p - (p // i) * inv[p % i] % p) % p
    table = np.array(inv, dtype=np.int64)
    table.flags.writeable = False
    return table


def gcd3(a: int, b: int, c: int) -> int:
    """gcd(|a|, |b|, c) with the gcd(0, n) = n convention."""
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    return math.gcd(a, b, c)


def divisor_count(c: int) -> int:
    """Number of positive divisors, by trial division up to sqrt(c)."""
    if not 1 <= c <= DIVISOR_COUNT_LIMIT:
        raise ValueError(f"divisor_count expects 1 <= c <= {DIVISOR_COUNT_LIMIT}")
    if c == 1:
        return 1
    if is_prime(c):
        return 2
    n = c
    count = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            count *= e + 1
        d += 1 if d == 2 else 2
    if n > 1:
        count *= 2
    return count


def _distinct_prime_factors(c: int) -> list[int]:
    if is_prime(c):
        return [c]
    if c > DIVISOR_COUNT_LIMIT:
        raise ValueError(f"factorization limited to c <= {DIVISOR_COUNT_LIMIT}")
    out = []
    n = c
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def coprime_count(start: int, length: int, c: int) -> int:
    """#{x in (start, start+length] : gcd(x, c) = 1} by inclusion-exclusion.

    Works for negative starts; 0 never counts as coprime for c >= 2.
    """
    if c < 2:
        raise ValueError(f"c must be >= 2, got {c}")
    if length <= 0:
        return 0
    primes = _distinct_prime_factors(c)
    hi, lo = start + length, start
    total = 0
    for mask in range(1 << len(primes)):
        d = 1
        bits = 0
        m = mask
        i = 0
        while m:
            if m & 1:
                d *= primes[i]
                bits += 1
            m >>= 1
            i += 1
        term = hi // d - lo // d
        total += -term if bits % 2 else term
    return total
