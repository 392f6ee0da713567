"""Finite torus realization of band-limited sampling, used as a numeric oracle.

A model fixes a period ``P`` and a sampling step ``a`` with ``M = P / a`` an
integer. Band-limited ``P``-periodic signals have frequencies
``n / P in E``; sampling at ``a z`` (``z = 0..M-1``) gives the analysis
matrix

    Theta[z, n] = exp(2 pi i n z / M) / sqrt(P).

With this normalization ``Theta^H Theta`` has eigenvalues ``c / a`` where
``c`` counts frequencies that alias together, so squared singular values
reproduce ``m_A / |a|``: the orthonormal case ``E = [0,1), a = 1, P = 1``
gives 1 and double oversampling gives 2.

Two models with a common period are compared on the coefficient index set
``0..L-1``, ``L = lcm(M1, M2)``, each sample sequence extended periodically
and rescaled by ``sqrt(M / L)`` so that a model compared with itself keeps
its own Gram matrix.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .bands import BandSet, as_fraction, format_band, format_fraction, intersect
from .errors import (
    DimensionMismatch,
    EmptyBandGrid,
    Incommensurable,
    NotDisjoint,
    NotTight,
    PeriodMismatch,
    RankAmbiguity,
)
from .lattice import multiplicity

NORM_CONVENTION = "theta[z,n] = exp(2*pi*i*n*z/M)/sqrt(P); squared singular values = m_A/|a|"

RANK_RTOL = 1e-12
# singular values in (AMBIGUITY_LOW, AMBIGUITY_HIGH) * s_max cannot be ranked safely
AMBIGUITY_LOW = 1e-13
AMBIGUITY_HIGH = 1e-9


def _frequencies(E: BandSet, P: Fraction) -> tuple[int, ...]:
    out = []
    for lo, hi in E.intervals():
        start = math.ceil(lo * P)
        stop = math.ceil(hi * P)  # hi excluded
        out.extend(range(start, stop))
    return tuple(sorted(set(out)))


@dataclass(frozen=True)
class DiscreteModel:
    period: Fraction
    band: BandSet
    step: Fraction
    M: int
    frequencies: tuple[int, ...]

    @cached_property
    def matrix(self) -> np.ndarray:
        return self.extended(self.M)

    def extended(self, L: int) -> np.ndarray:
        """Analysis matrix on ``L`` sample indices (``L`` a multiple of ``M``)."""
        if L % self.M:
            raise ValueError(f"{L} is not a multiple of M={self.M}")
        z = np.arange(L)
        n = np.array(self.frequencies, dtype=np.int64)
        phase = np.outer(z, n) % self.M  # exact reduction keeps phases accurate
        scale = 1.0 / math.sqrt(float(self.period)) * math.sqrt(self.M / L)
        return np.exp(2j * np.pi * phase / self.M) * scale

    def grid_points(self) -> list[Fraction]:
        """Torus frequencies ``n / M mod 1`` carried by the model."""
        return sorted({Fraction(n % self.M, self.M) for n in self.frequencies})

    def resolves(self) -> bool:
        """True when every non-zero piece of ``m_A`` contains a grid point ``j / M``."""
        m = multiplicity(self.band, self.step)
        for b, v in m.pieces:
            if v == 0:
                continue
            lo, hi = b.lo[0], b.hi[0]
            if math.ceil(lo * self.M) >= hi * self.M:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "P": format_fraction(self.period),
            "a": format_fraction(self.step),
            "M": self.M,
            "band": format_band(self.band),
            "frequencies": list(self.frequencies),
            "norm_convention": NORM_CONVENTION,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def build_model(E: BandSet, a, P) -> DiscreteModel:
    if E.dim != 1:
        raise DimensionMismatch("discrete models are one-dimensional")
    a, P = as_fraction(a), as_fraction(P)
    if a <= 0 or P <= 0:
        raise ValueError("step and period must be positive")
    ratio = P / a
    if ratio.denominator != 1:
        raise Incommensurable(f"P/a = {ratio} is not an integer")
    freqs = _frequencies(E, P)
    if not freqs:
        suggestion = None
        if not E.is_empty:
            longest = max(hi - lo for lo, hi in E.intervals())
            for k in range(1, math.ceil(1 / (a * longest)) + 2):
                if _frequencies(E, a * k):
                    suggestion = a * k
                    break
        raise EmptyBandGrid(
            f"no frequency n/P lies in the band for P={P}"
            + (f"; smallest working period is {suggestion}" if suggestion is not None else ""),
            suggested_period=suggestion,
        )
    return DiscreteModel(P, E, a, int(ratio), freqs)


def _svd_rank(s: np.ndarray) -> int:
    if s.size == 0 or s[0] == 0:
        return 0
    rel = s / s[0]
    ambiguous = (rel > AMBIGUITY_LOW) & (rel < AMBIGUITY_HIGH)
    if ambiguous.any():
        raise RankAmbiguity(
            f"singular value ratio {rel[ambiguous][0]:.3e} is too close to the rank threshold"
        )
    return int(np.count_nonzero(rel > RANK_RTOL))


def range_basis(theta: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the column space via a rank-revealing SVD."""
    u, s, _ = np.linalg.svd(theta, full_matrices=False)
    return u[:, : _svd_rank(s)]


def pinv_solve(theta: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Minimum-norm least-squares solution of ``theta x = c``."""
    u, s, vh = np.linalg.svd(theta, full_matrices=False)
    r = _svd_rank(s)
    return vh[:r].conj().T @ ((u[:, :r].conj().T @ c) / s[:r])


def frame_bounds_numeric(m: DiscreteModel) -> tuple[float, float]:
    """Smallest non-zero and largest squared singular values of the analysis matrix."""
    s = np.linalg.svd(m.matrix, compute_uv=False)
    r = _svd_rank(s)
    return float(s[r - 1] ** 2), float(s[0] ** 2)


def _common_length(m1: DiscreteModel, m2: DiscreteModel) -> int:
    if m1.period != m2.period:
        raise PeriodMismatch(f"periods {m1.period} and {m2.period} differ")
    return math.lcm(m1.M, m2.M)


def cross_gram(m1: DiscreteModel, m2: DiscreteModel) -> float:
    """Operator norm of ``Theta1^H Theta2`` on the common coefficient space."""
    L = _common_length(m1, m2)
    G = m1.extended(L).conj().T @ m2.extended(L)
    return float(np.linalg.norm(G, 2)) if G.size else 0.0


def collisions(m1: DiscreteModel, m2: DiscreteModel) -> list[tuple[int, int]]:
    """Frequency pairs whose sample sequences coincide, decided in integers."""
    L = _common_length(m1, m2)
    r1, r2 = L // m1.M, L // m2.M
    by_class = {}
    for n in m2.frequencies:
        by_class.setdefault((n * r2) % L, []).append(n)
    return [(n, k) for n in m1.frequencies for k in by_class.get((n * r1) % L, [])]


def projections_commutator(m1: DiscreteModel, m2: DiscreteModel) -> float:
    L = _common_length(m1, m2)
    U1 = range_basis(m1.extended(L))
    U2 = range_basis(m2.extended(L))
    P1 = U1 @ U1.conj().T
    P2 = U2 @ U2.conj().T
    return float(np.linalg.norm(P1 @ P2 - P2 @ P1, 2))


@dataclass(frozen=True)
class MuxResult:
    f: np.ndarray
    g: np.ndarray
    crosstalk: float
    stream: np.ndarray


def _rel_err(x, y):
    nx = np.linalg.norm(x)
    err = np.linalg.norm(x - y)
    return float(err / nx) if nx > 0 else float(err)


def multiplex_roundtrip(m1: DiscreteModel, f, m2: DiscreteModel, g, force: bool = False,
                        tol: float = 1e-10) -> MuxResult:
    """Sum two sample streams into one channel and separate them again.

    Each signal is recovered by least squares against its own analysis
    matrix (the standard dual). Recovery is exact up to rounding when the
    ranges are orthogonal; ``force`` skips that check for negative controls.
    """
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    if not force:
        cg = cross_gram(m1, m2)
        if cg > tol:
            raise NotDisjoint(f"cross-Gram norm {cg:.3e} exceeds {tol:.1e}")
    L = _common_length(m1, m2)
    T1, T2 = m1.extended(L), m2.extended(L)
    c = T1 @ f + T2 @ g
    f_rec = pinv_solve(T1, c)
    g_rec = pinv_solve(T2, c)
    crosstalk = max(_rel_err(f, f_rec), _rel_err(g, g_rec))
    return MuxResult(f_rec, g_rec, crosstalk, c)


def least_squares_reconstruct(m: DiscreteModel, samples) -> np.ndarray:
    return pinv_solve(m.matrix, np.asarray(samples, dtype=complex))


def reconstruct_closed_form(m: DiscreteModel, samples) -> np.ndarray:
    """Tight-frame inversion ``c = |a| Theta^H samples``.

    Only valid when ``a`` is a sampling step for the band, in which case the
    frame operator is ``I / |a|``.
    """
    if multiplicity(m.band, m.step).max() > 1:
        raise NotTight("step is not a sampling step for the band; use least_squares_reconstruct")
    return float(abs(m.step)) * (m.matrix.conj().T @ np.asarray(samples, dtype=complex))


def resolving_period(E: BandSet, a, F: BandSet | None = None, b=None, max_size: int = 512):
    """Smallest admissible period whose grids resolve every exact piece.

    Requires both models to resolve their multiplicity pieces and, for a pair,
    every piece of the support intersection to contain a common grid point.
    Returns ``None`` when no period keeps matrices within ``max_size``.
    """
    a = as_fraction(a)
    steps = [a] if F is None else [a, as_fraction(b)]
    base = Fraction(math.lcm(*(s.numerator for s in steps)), 1)
    # smallest P with P / s integral for every step s
    P = base
    k = 1
    while True:
        P = base * k
        Ms = [P / s for s in steps]
        if any(Mv.denominator != 1 for Mv in Ms):
            k += 1
            continue
        if max(int(Mv) for Mv in Ms) > max_size:
            return None
        try:
            models = [build_model(E, a, P)] + ([build_model(F, b, P)] if F is not None else [])
        except EmptyBandGrid:
            k += 1
            continue
        if all(m.resolves() for m in models) and (F is None or _pair_resolves(*models)):
            return P
        k += 1


def _pair_resolves(m1: DiscreteModel, m2: DiscreteModel) -> bool:
    g = math.gcd(m1.M, m2.M)
    common = intersect(multiplicity(m1.band, m1.step).support(), multiplicity(m2.band, m2.step).support())
    for lo, hi in common.intervals():
        if math.ceil(lo * g) >= hi * g:
            return False
    return True


def vector_to_csv(v) -> str:
    buf = io.StringIO()
    buf.write("re,im\n")
    for x in np.asarray(v, dtype=complex):
        buf.write(f"{float(x.real)!r},{float(x.imag)!r}\n")
    return buf.getvalue()


def vector_from_csv(text: str) -> np.ndarray:
    rows = [ln for ln in text.strip().splitlines()[1:] if ln.strip()]
    return np.array([complex(float(r), float(i)) for r, i in (row.split(",") for row in rows)])
