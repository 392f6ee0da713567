"""Numeric cross-correlation oracle for strong disjointness.

Two Bessel systems have orthogonal analysis ranges exactly when

    sum_j sum_z <h1, U_z p_j> conj(<h2, U_z q_j>) = 0

for all test vectors ``h1, h2``, where ``U_z`` runs over the shift group
(translations on the frequency side are modulations on the time side).
The functions here truncate the sum to ``|z| <= Z`` and evaluate each inner
product with composite Gauss-Legendre quadrature split at every
breakpoint. Truncation converges fast only for smooth integrands; a
characteristic window times a smooth test vector has jumps, and its
Fourier coefficients decay like ``1/z``. For those windows use
:func:`finite_group_gabor_sum`, the exact analogue on a finite group.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bands import BandSet, RationalBox, as_fraction
from .profiles import Bump, BumpSum, SincSum, SpectralProfile

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def _bounds(*profiles: SpectralProfile) -> tuple[float, float]:
    lo, hi = -math.inf, math.inf
    for p in profiles:
        if p.full_support:
            continue
        bb = p.support().bounding_box()
        if bb is None:
            return 0.0, 0.0
        lo, hi = max(lo, float(bb.lo[0])), min(hi, float(bb.hi[0]))
    if not math.isfinite(lo) or not math.isfinite(hi):
        raise ValueError("at least one factor of each inner product must have bounded support")
    return lo, hi


def quadrature_nodes(lo: float, hi: float, breaks: Sequence[float], panel: float):
    """Gauss-Legendre nodes and weights on ``[lo, hi]`` with panels no wider than ``panel``."""
    pts = sorted({lo, hi} | {b for b in breaks if lo < b < hi})
    xs, ws = [], []
    for a, b in zip(pts[:-1], pts[1:]):
        n = max(1, math.ceil((b - a) / panel))
        edges = np.linspace(a, b, n + 1)
        half = (edges[1:] - edges[:-1]) / 2
        mid = (edges[1:] + edges[:-1]) / 2
        xs.append((mid[:, None] + half[:, None] * _GL_X[None, :]).ravel())
        ws.append((half[:, None] * _GL_W[None, :]).ravel())
    if not xs:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(xs), np.concatenate(ws)


def shift_coefficients(h: SpectralProfile, p: SpectralProfile, step, Z: int, sign: int = 1,
                       panel: float = 1 / 256) -> np.ndarray:
    """``c_z = int h(x) conj(p(x)) exp(sign 2 pi i step z x) dx`` for ``z = -Z..Z``."""
    lo, hi = _bounds(h, p)
    if hi <= lo:
        return np.zeros(2 * Z + 1, dtype=complex)
    breaks = [float(b) for b in h.breakpoints()] + [float(b) for b in p.breakpoints()]
    x, w = quadrature_nodes(lo, hi, breaks, panel)
    u = h.evaluate(x) * np.conj(p.evaluate(x)) * w
    z = np.arange(-Z, Z + 1)
    phase = np.exp(sign * 2j * np.pi * float(step) * np.outer(z, x))
    return phase @ u


def cross_correlation(h1, h2, ps: Sequence[SpectralProfile], qs: Sequence[SpectralProfile],
                      step, Z: int = 64, sign: int = 1, panel: float = 1 / 256, step2=None) -> complex:
    """Truncated ``sum_j sum_{|z|<=Z} <h1, U_z p_j> conj(<h2, U_z q_j>)``.

    ``step`` is the shift-group step in the domain where profiles live: the
    translation step for frequency profiles, the modulation step for time
    profiles. ``step2`` gives the second system its own step (default ``step``).
    """
    step2 = step if step2 is None else step2
    total = 0j
    for p, q in zip(ps, qs):
        c1 = shift_coefficients(h1, p, step, Z, sign, panel)
        c2 = shift_coefficients(h2, q, step2, Z, sign, panel)
        total += complex(np.vdot(c2, c1))
    return total


def gabor_cross_correlation(h1, h2, fs, gs, A, X, Z: int = 64, panel: float = 1 / 256) -> complex:
    """Truncated Gabor cross sum over ``|z|, |l| <= Z`` for time-domain windows.

    Uses ``<h, E_{Al} T_{Xz} f> = int h(x + Xz) conj(f(x)) exp(-2 pi i A l (x + Xz)) dx``;
    the window must have bounded support.
    """
    A, X = float(as_fraction(A)), float(as_fraction(X))
    total = 0j
    l = np.arange(-Z, Z + 1)
    for f, g in zip(fs, gs):
        bb_f = f.support().bounding_box()
        bb_g = g.support().bounding_box()
        xf, wf = quadrature_nodes(float(bb_f.lo[0]), float(bb_f.hi[0]), [float(b) for b in f.breakpoints()], panel)
        xg, wg = quadrature_nodes(float(bb_g.lo[0]), float(bb_g.hi[0]), [float(b) for b in g.breakpoints()], panel)
        ef = np.exp(-2j * np.pi * A * np.outer(l, xf))
        eg = np.exp(-2j * np.pi * A * np.outer(l, xg))
        cf, cg = np.conj(f.evaluate(xf)) * wf, np.conj(g.evaluate(xg)) * wg
        for z in range(-Z, Z + 1):
            shift = X * z
            common = np.exp(-2j * np.pi * A * l * shift)
            c1 = common * (ef @ (h1.evaluate(xf + shift) * cf))
            c2 = common * (eg @ (h2.evaluate(xg + shift) * cg))
            total += complex(np.vdot(c2, c1))
    return total


def finite_group_gabor_sum(u1: np.ndarray, u2: np.ndarray, f: np.ndarray, g: np.ndarray, R: int) -> complex:
    """Exact Gabor cross sum on ``Z_N``, ``N = K R``: translations by ``R``, all ``R`` modulations.

    Sampling ``x = n / R`` turns unit translations into shifts by ``R`` and
    integer modulations into the characters ``exp(2 pi i l n / R)``.
    """
    N = len(u1)
    K = N // R
    if K * R != N:
        raise ValueError("signal length must be a multiple of R")
    total = 0j
    for z in range(K):
        a = (u1 * np.conj(np.roll(f, z * R))).reshape(K, R).sum(axis=0)
        b = (u2 * np.conj(np.roll(g, z * R))).reshape(K, R).sum(axis=0)
        total += complex(np.vdot(np.fft.fft(b), np.fft.fft(a)))
    return total


# -- random smooth test vectors --------------------------------------------------

def random_bump_sum(rng: np.random.Generator, lo: Fraction, hi: Fraction, n: int = 4,
                    denominator: int = 16, domain: str = "frequency") -> BumpSum:
    """Sum of ``n`` bumps with random rational intervals inside ``[lo, hi)``."""
    lo, hi = as_fraction(lo), as_fraction(hi)
    span = int((hi - lo) * denominator)
    bumps, coeffs = [], []
    for _ in range(n):
        a, b = sorted(rng.choice(span + 1, size=2, replace=False))
        band = BandSet((RationalBox.interval(lo + Fraction(int(a), denominator), lo + Fraction(int(b), denominator)),), 1)
        bumps.append(Bump(band, domain))
        coeffs.append(complex(rng.normal(), rng.normal()))
    return BumpSum(tuple(bumps), tuple(coeffs), domain)


def random_sinc_sum(rng: np.random.Generator, bandwidth: float = 2.0, n: int = 4,
                    spread: float = 2.0) -> SincSum:
    """Band-limited time-domain test vector."""
    coeffs = tuple(complex(rng.normal(), rng.normal()) for _ in range(n))
    centers = tuple(float(c) for c in rng.uniform(-spread, spread, size=n))
    return SincSum(coeffs, centers, bandwidth)
