"""Smooth compactly supported cutoff windows and their Fourier analysis.

A window at scale N occupies [N, 2N]: it rises from 0 to 1 across
[N, N+2*delta], sits at 1 on the plateau [N+2*delta, 2N-2*delta], and
falls back across [2N-2*delta, 2N].  It is exactly the indicator of
[N+delta, 2N-delta] convolved with a unit-mass bump of radius delta, so
its integral is N-2*delta and its Fourier transform decays faster than
any polynomial.  That decay is what keeps the truncation tail of the
completion identity (interval sum expressed through all complete sums)
certifiably small.

The edge profile is the normalized antiderivative of
t -> exp(-1/(t(1-t))) on (0,1).  It is tabulated once per window as
cumulative panel integrals; evaluation anywhere finishes the last panel
with a short Gauss-Legendre rule, so the profile is smooth to machine
precision rather than a piecewise interpolant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import polygamma

from .arith import INT64_PHASE_LIMIT, Modulus, batch_inverse, inverse_table
from .errors import DegenerateWindow, QuadratureNonConvergence
from .spectral import SpectrumVector

_BASE_LEVEL = 3
_MAX_LEVEL = 15


def _bump(t: np.ndarray) -> np.ndarray:
    """exp(-1/(t(1-t))) on (0,1), zero elsewhere."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = (t > 0.0) & (t < 1.0)
    ti = t[inside]
    with np.errstate(over="ignore"):
        out[inside] = np.exp(-1.0 / (ti * (1.0 - ti)))
    return out


class SmoothWindow:
    """Evaluable smooth cutoff plus its reusable quadrature state."""

    def __init__(self, scale: float, delta: float, quadrature_order: int = 16,
                 edge_panels: int = 4096):
        if not (scale > 0 and delta > 0) or 4.0 * delta >= scale:
            raise DegenerateWindow(
                f"need 0 < 4*delta < scale, got scale={scale}, delta={delta}"
            )
        if edge_panels < 4096:
            raise ValueError("edge table needs at least 4096 panels")
        self.scale = float(scale)
        self.delta = float(delta)
        self.quadrature_order = int(quadrature_order)
        self.edge_panels = int(edge_panels)
        self._gl_nodes, self._gl_weights = np.polynomial.legendre.leggauss(
            self.quadrature_order
        )
        half = 0.5 / self.edge_panels
        centers = (np.arange(self.edge_panels) + 0.5) / self.edge_panels
        pts = centers[:, None] + half * self._gl_nodes[None, :]
        self._panel_mass = (_bump(pts) @ self._gl_weights) * half
        self._cum = np.concatenate(([0.0], np.cumsum(self._panel_mass)))
        self._mass = float(self._cum[-1])
        self._edge_cache: dict[int, tuple] = {}
        self._order2_constant: float | None = None

    @property
    def support(self) -> tuple[float, float]:
        return (self.scale, 2.0 * self.scale)

    @property
    def plateau(self) -> tuple[float, float]:
        return (self.scale + 2.0 * self.delta, 2.0 * self.scale - 2.0 * self.delta)

    @property
    def smoothstep_table(self) -> np.ndarray:
        """Monotone edge profile sampled at the panel knots."""
        return self._cum / self._mass

    def _edge_profile(self, u: np.ndarray) -> np.ndarray:
        """Normalized antiderivative of the bump at u in [0,1], vectorized.

        Clipping the partial-panel integral into [0, panel mass] makes the
        profile exactly monotone across query points.
        """
        u = np.asarray(u, dtype=float)
        out = np.zeros(u.shape)
        out[u >= 1.0] = 1.0
        mid = (u > 0.0) & (u < 1.0)
        if np.any(mid):
            um = u[mid]
            i = np.minimum((um * self.edge_panels).astype(np.int64),
                           self.edge_panels - 1)
            lo = i / self.edge_panels
            half = (um - lo) / 2.0
            pts = (lo + half)[:, None] + half[:, None] * self._gl_nodes[None, :]
            partial = (_bump(pts) @ self._gl_weights) * half
            partial = np.clip(partial, 0.0, self._panel_mass[i])
            out[mid] = (self._cum[i] + partial) / self._mass
        return out


def build_window(scale: float, delta: float | None = None, quadrature_order: int = 16,
                 edge_panels: int = 4096) -> SmoothWindow:
    """Construct a window; delta defaults to scale/8."""
    if delta is None:
        delta = scale / 8.0
    return SmoothWindow(scale, delta, quadrature_order, edge_panels)


def window_eval(w: SmoothWindow, t):
    """phi(t) in [0, 1]: zero outside the support, one on the plateau,
    mollified monotone edges in between.  Accepts scalars or arrays."""
    t_in = np.asarray(t, dtype=float)
    tt = np.atleast_1d(t_in)
    n, d = w.scale, w.delta
    phi = np.zeros(tt.shape)
    flat = (tt >= n + 2 * d) & (tt <= 2 * n - 2 * d)
    rise = (tt > n) & (tt < n + 2 * d)
    fall = (tt > 2 * n - 2 * d) & (tt < 2 * n)
    phi[flat] = 1.0
    phi[rise] = w._edge_profile((tt[rise] - n) / (2 * d))
    phi[fall] = w._edge_profile((2 * n - tt[fall]) / (2 * d))
    return float(phi[0]) if t_in.ndim == 0 else phi


def _edge_nodes(w: SmoothWindow, level: int):
    # Composite Gauss-Legendre nodes over [0,1] with 2^level panels; the
    # profile values are cached since they do not depend on the frequency.
    if level not in w._edge_cache:
        panels = 1 << level
        half = 0.5 / panels
        centers = (np.arange(panels) + 0.5) / panels
        pts = (centers[:, None] + half * w._gl_nodes[None, :]).ravel()
        wts = np.tile(w._gl_weights * half, panels)
        w._edge_cache[level] = (pts, wts * w._edge_profile(pts))
    return w._edge_cache[level]


def _edge_moment(w: SmoothWindow, mu: float, level: int) -> complex:
    pts, wprof = _edge_nodes(w, level)
    return complex(np.dot(wprof, np.exp((-2j * np.pi * mu) * pts)))


def _edge_integral(w: SmoothWindow, mu: float) -> complex:
    """integral over [0,1] of profile(u) e(-mu u) du, refined until two
    successive panel doublings agree."""
    tol = 1e-10 * w.scale / (4.0 * w.delta)
    level = max(_BASE_LEVEL, math.ceil(math.log2(max(abs(mu), 1.0))))
    if level > _MAX_LEVEL:
        raise QuadratureNonConvergence(
            f"frequency |mu|={abs(mu):.3g} beyond the node budget"
        )
    prev = _edge_moment(w, mu, level)
    for lvl in range(level + 1, _MAX_LEVEL + 1):
        cur = _edge_moment(w, mu, lvl)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise QuadratureNonConvergence(
        f"edge quadrature stalled at |mu|={abs(mu):.3g}"
    )


def window_fourier(w: SmoothWindow, lam: float) -> complex:
    """phihat(lam) = integral of phi(x) e(-lam x) dx over the support.

    The plateau integrates in closed form; the two edges are reflections
    of each other, so a single refined edge quadrature serves both.
    """
    lam = float(lam)
    if lam < 0.0:
        return complex(np.conj(window_fourier(w, -lam)))
    n, d = w.scale, w.delta
    edge = _edge_integral(w, 2.0 * d * lam)
    if lam == 0.0:
        plat = complex(n - 4.0 * d)
    else:
        hi, lo = 2 * n - 2 * d, n + 2 * d
        plat = (np.exp(-2j * np.pi * lam * hi) - np.exp(-2j * np.pi * lam * lo)) / (
            -2j * np.pi * lam
        )
    return complex(
        plat
        + 2 * d * np.exp(-2j * np.pi * lam * n) * edge
        + 2 * d * np.exp(-4j * np.pi * lam * n) * np.conj(edge)
    )


def window_fourier_many(w: SmoothWindow, lams) -> np.ndarray:
    """phihat over a whole grid (one refined quadrature per frequency)."""
    return np.array([window_fourier(w, lam) for lam in np.asarray(lams, dtype=float)])


def default_lambda_grid(scale: float, max_scaled: float = 1000.0,
                        points: int = 161) -> np.ndarray:
    """Frequency grid {0} union geometric in scaled frequency |lam|*scale,
    spanning [0.05, max_scaled]."""
    scaled = np.concatenate(([0.0], np.geomspace(0.05, max_scaled, points)))
    return scaled / scale


def decay_constant(w: SmoothWindow, order: int, lambda_grid) -> float:
    """Empirical decay constant: max over the grid of
    |phihat(lam)| (1+|lam| N)^order / N."""
    grid = np.asarray(lambda_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("lambda grid must be nonempty")
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    vals = np.abs(window_fourier_many(w, grid))
    return float(np.max(vals * (1.0 + np.abs(grid) * w.scale) ** order / w.scale))


def _order2_constant(w: SmoothWindow) -> float:
    if w._order2_constant is None:
        w._order2_constant = decay_constant(w, 2, default_lambda_grid(w.scale))
    return w._order2_constant


@dataclass(frozen=True)
class CompletionResult:
    """Both sides of the completion identity plus a certified tail bound."""

    smoothed_sum: complex
    completed_sum: complex
    truncation_height: int
    tail_estimate: float

    @property
    def defect(self) -> float:
        return abs(self.smoothed_sum - self.completed_sum)


def smoothed_incomplete_sum(a: int, b: int, p: Modulus, start: int,
                            w: SmoothWindow) -> complex:
    """Window-weighted interval sum:
    sum over integers n in the support of
    phi(n) e((a(n+start) + b*inv(n+start))/p), skipping p | n+start."""
    if not p.is_prime:
        raise ValueError(f"modulus {p.c} is not prime")
    pp = p.c
    ns = np.arange(math.floor(w.scale) + 1, math.ceil(2.0 * w.scale))
    if ns.size == 0:
        return 0j
    phi = window_eval(w, ns.astype(float))
    r = (ns + start) % pp
    keep = r != 0
    r, phi = r[keep], phi[keep]
    if r.size == 0:
        return 0j
    if pp < INT64_PHASE_LIMIT:
        inv = inverse_table(pp)[r]
        k = ((a % pp) * r + (b % pp) * inv) % pp
        t = k / pp
    else:
        invs = batch_inverse(r.tolist(), p)
        t = np.array([((a * ri + b * vi) % pp) / pp for ri, vi in zip(r.tolist(), invs)])
    z = phi * np.exp(2j * np.pi * t)
    return complex(math.fsum(z.real), math.fsum(z.imag))


def poisson_completion(a: int, b: int, p: Modulus, start: int, w: SmoothWindow,
                       height: int, spectrum: SpectrumVector) -> CompletionResult:
    """Evaluate the completion identity at truncation |n| <= height.

    completed_sum = (1/p) sum_{|n|<=height} phihat(n/p) e(-start*n/p)
    S(n+a, b; p); the discarded terms are bounded by the order-2 decay
    constant of the window together with the square-root bound 2*sqrt(p)
    on each complete sum, summed in closed form via the trigamma function.
    """
    if height < 1:
        raise ValueError(f"truncation height must be >= 1, got {height}")
    if spectrum.kind != "complete" or spectrum.p.c != p.c or (spectrum.b - b) % p.c != 0:
        raise ValueError("spectrum must be the complete kind for (b, p)")
    pp = p.c
    smoothed = smoothed_incomplete_sum(a, b, p, start, w)
    pos = window_fourier_many(w, np.arange(1, height + 1) / pp)
    phihat = np.concatenate((np.conj(pos[::-1]), [window_fourier(w, 0.0)], pos))
    nn = np.arange(-height, height + 1, dtype=np.int64)
    twist = np.exp(-2j * np.pi * ((start % pp) * (nn % pp) % pp) / pp)
    idx = (nn + a) % pp
    completed = complex(np.dot(phihat * twist, spectrum.values[idx]) / pp)
    ratio = pp / w.scale
    tail = (
        _order2_constant(w)
        * math.sqrt(pp)
        * 2.0
        * ratio**2
        * float(polygamma(1, height + 1 + ratio))
    )
    return CompletionResult(smoothed, completed, int(height), tail)
