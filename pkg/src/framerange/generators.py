"""Disjointness and similarity verdicts for affine, quasi-affine and Gabor systems.

A verdict compares periodized generator supports. Orthogonality of ranges
(strong disjointness) is certified when every paired support intersection
is null. Equality and containment of supports are only necessary
conditions for similarity, so they never certify anything.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bands import (
    BandSet,
    affine_map,
    as_fraction,
    difference,
    format_band,
    format_fraction,
    intersect,
    unit_cube,
)
from .errors import LengthMismatch, MissingTimeProfile, NotExpansive, UnsupportedMatrix
from .lattice import Lattice, TorusStep, as_lattice, fold, multiplicity, periodize_weighted
from .profiles import FourierDual, FrazierJawerth, SpectralProfile, dilate_profile


class Status(enum.Enum):
    CERTIFIED_SUFFICIENT = "CertifiedSufficient"
    NECESSARY_CONDITIONS_HOLD = "NecessaryConditionsHold"
    VIOLATED = "Violated"


VERDICT_CLAIMS = ("orthogonal", "equal", "contained")


@dataclass(frozen=True)
class Periodization:
    """Periodized ``|p|^2`` on the torus: exact support, exact or sampled values."""

    support: BandSet
    step: TorusStep | None = None
    samples: np.ndarray | None = None
    grid: np.ndarray | None = None
    truncated: bool = False

    def to_csv(self) -> str:
        if self.step is not None:
            return self.step.to_csv()
        lines = ["xi,value"] + [f"{x!r},{v!r}" for x, v in zip(self.grid, self.samples)]
        return "\n".join(lines) + "\n"


def _lattice_1d(X) -> Lattice:
    X = as_lattice(X, 1)
    if not X.is_diagonal:
        raise UnsupportedMatrix("generator periodization needs a diagonal lattice")
    return X


def periodization_sq(p: SpectralProfile, X, resolution: int = 1024, k_max: int = 200) -> Periodization:
    """``sum_k |p(X^{-1}(xi + k))|^2`` on ``[0, 1)``.

    The support is the fold of ``X * support(p)``; profiles with unbounded
    support periodize to the whole torus. Values are exact for
    piecewise-constant ``|p|^2`` and sampled at ``resolution`` cell
    midpoints otherwise.
    """
    X = _lattice_1d(X) if not isinstance(X, Lattice) or X.dim == 1 else X
    scale = X.adjoint().diag
    dim = len(scale)
    pieces = p.step_pieces()
    if pieces is not None:
        step = periodize_weighted([(affine_map(b, scale), w) for b, w in pieces], dim)
        return Periodization(step.support(), step=step)
    if dim != 1:
        raise UnsupportedMatrix("only characteristic profiles are multi-dimensional")
    s = float(scale[0])
    xi = (np.arange(resolution) + 0.5) / resolution
    if p.full_support:
        support = unit_cube(1)
        ks = range(-k_max, k_max + 1)
        truncated = True
    else:
        image = affine_map(p.support(), scale)
        support = fold(image)
        lo, hi = image.bounding_box().lo[0], image.bounding_box().hi[0]
        ks = range(int(np.floor(float(lo))) - 1, int(np.ceil(float(hi))) + 1)
        truncated = False
    total = np.zeros(resolution)
    for k in ks:
        total += np.abs(p.evaluate((xi + k) / s)) ** 2
    return Periodization(support, samples=total, grid=xi, truncated=truncated)


def periodized_support(p: SpectralProfile, X) -> BandSet:
    X = as_lattice(X, 1)
    if p.full_support:
        return unit_cube(X.dim)
    if not X.is_diagonal:
        raise UnsupportedMatrix("generator periodization needs a diagonal lattice")
    return fold(affine_map(p.support(), X.adjoint().diag))


@dataclass(frozen=True)
class DisjointnessVerdict:
    claim: str
    status: Status
    pairs: tuple[tuple[BandSet, BandSet], ...]
    time_pairs: tuple[tuple[BandSet, BandSet], ...] | None = None
    route: str | None = None
    side_conditions: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    @property
    def certified(self) -> bool:
        return self.status is Status.CERTIFIED_SUFFICIENT

    def to_report(self) -> dict:
        def fmt(pairs):
            return [
                {
                    "supports": [format_band(a), format_band(b)],
                    "intersection_measure": format_fraction(intersect(a, b).measure()),
                }
                for a, b in pairs
            ]

        out = {
            "kind": self.status.value,
            "claim": self.claim,
            "certified": self.certified,
            "route": self.route,
            "pairs": fmt(self.pairs),
            "side_conditions": dict(self.side_conditions),
            "notes": list(self.notes),
        }
        if self.time_pairs is not None:
            out["time_pairs"] = fmt(self.time_pairs)
        return out


def _check_claim(claim: str):
    if claim not in VERDICT_CLAIMS:
        raise ValueError(f"unknown claim {claim!r}; expected one of {VERDICT_CLAIMS}")


def _pairs_hold(claim: str, pairs) -> bool:
    if claim == "orthogonal":
        return all(intersect(a, b).is_empty for a, b in pairs)
    if claim == "equal":
        return all(a == b for a, b in pairs)
    return all(difference(a, b).is_empty for a, b in pairs)


def _status(claim: str, ok: bool) -> Status:
    if not ok:
        return Status.VIOLATED
    return Status.CERTIFIED_SUFFICIENT if claim == "orthogonal" else Status.NECESSARY_CONDITIONS_HOLD


def _same_length(a: Sequence, b: Sequence):
    if len(a) != len(b):
        raise LengthMismatch(f"generator lists have lengths {len(a)} and {len(b)}")
    if not a:
        raise LengthMismatch("generator lists are empty")


def affine_verdict(psis: Sequence[SpectralProfile], X, phis: Sequence[SpectralProfile], Y,
                   claim: str = "orthogonal") -> DisjointnessVerdict:
    """Compare affine systems generator by generator at the base scale."""
    _check_claim(claim)
    _same_length(psis, phis)
    pairs = tuple((periodized_support(p, X), periodized_support(q, Y)) for p, q in zip(psis, phis))
    notes = ()
    if claim != "orthogonal":
        notes = ("support agreement is necessary for similarity, never sufficient",)
    return DisjointnessVerdict(claim, _status(claim, _pairs_hold(claim, pairs)), pairs,
                               route="frequency", notes=notes)


# -- quasi-affine ----------------------------------------------------------------

@dataclass(frozen=True)
class QuasiAffineRow:
    r: int
    j: int
    first: BandSet
    second: BandSet

    def holds(self, claim: str) -> bool:
        return _pairs_hold(claim, [(self.first, self.second)])


@dataclass(frozen=True)
class QuasiAffineReport:
    claim: str
    rows: tuple[QuasiAffineRow, ...]
    status: Status
    truncated: bool
    route: str
    failing_r: tuple[int, ...]

    @property
    def certified(self) -> bool:
        return self.status is Status.CERTIFIED_SUFFICIENT

    def supports(self, which: str = "first", j: int = 0) -> dict[int, BandSet]:
        return {row.r: getattr(row, which) for row in self.rows if row.j == j}

    def to_report(self) -> dict:
        return {
            "kind": self.status.value,
            "claim": self.claim,
            "certified": self.certified,
            "route": self.route,
            "truncated": self.truncated,
            "failing_r": list(self.failing_r),
            "rows": [
                {
                    "r": row.r,
                    "j": row.j,
                    "supports": [format_band(row.first), format_band(row.second)],
                    "holds": row.holds(self.claim),
                }
                for row in self.rows
            ],
        }


def _expansive(a) -> Fraction:
    a = as_fraction(a)
    if abs(a) <= 1:
        raise NotExpansive(f"dilation {a} is not expansive")
    return a


def quasi_affine_report(psis, A, X, phis, B, Y, r_min: int = -8,
                        claim: str = "orthogonal") -> QuasiAffineReport:
    """Per-scale support table for quasi-affine systems, scales ``r_min..0``.

    The scale-``r`` sum uses the lattice ``X A^r``. Only finitely many
    scales are inspected, so the report is flagged truncated unless the
    integer-lattice shortcut applies: with identity translation lattices
    and a common integer dilation, disjointness at ``r = 0`` already
    certifies orthogonality.
    """
    _check_claim(claim)
    _same_length(psis, phis)
    if r_min > 0:
        raise ValueError("r_min must be <= 0")
    A, B = _expansive(A), _expansive(B)
    X, Y = as_lattice(X, 1), as_lattice(Y, 1)
    rows = []
    for r in range(0, r_min - 1, -1):
        LX = X * Lattice.scalar(A**r)
        LY = Y * Lattice.scalar(B**r)
        for j, (p, q) in enumerate(zip(psis, phis)):
            rows.append(QuasiAffineRow(r, j, periodized_support(p, LX), periodized_support(q, LY)))
    failing = tuple(sorted({row.r for row in rows if not row.holds(claim)}, reverse=True))
    identity = Lattice.scalar(1)
    shortcut = (claim == "orthogonal" and X.unshifted() == identity and Y.unshifted() == identity
                 and A == B and A.denominator == 1)
    if shortcut:
        base_ok = all(row.holds(claim) for row in rows if row.r == 0)
        return QuasiAffineReport(claim, tuple(rows), _status(claim, base_ok), False,
                                 "integer-lattice shortcut", tuple(r for r in failing if r == 0))
    return QuasiAffineReport(claim, tuple(rows), _status(claim, not failing), True,
                             "sampled scales", failing)


# -- Weyl-Heisenberg --------------------------------------------------------------

@dataclass(frozen=True)
class GaborGenerator:
    """Window given in frequency, time, or both domains."""

    frequency: SpectralProfile | None = None
    time: SpectralProfile | None = None

    def __post_init__(self):
        if self.frequency is None and self.time is None:
            raise MissingTimeProfile("a Gabor generator needs at least one profile")

    @classmethod
    def of(cls, p) -> "GaborGenerator":
        if isinstance(p, GaborGenerator):
            return p
        return cls(frequency=p) if p.domain == "frequency" else cls(time=p)

    def freq_profile(self) -> SpectralProfile:
        return self.frequency if self.frequency is not None else FourierDual(self.time)

    def time_profile(self) -> SpectralProfile:
        return self.time if self.time is not None else FourierDual(self.frequency)


def wh_verdict(fs, A, X, gs, B, Y, claim: str = "orthogonal", route: str = "auto") -> DisjointnessVerdict:
    """Support verdict for Gabor systems ``{E_{Al} T_{Xz} f_j}`` versus ``{E_{Bl} T_{Yz} g_j}``.

    Frequency supports come from ``X, Y`` and time supports from ``A, B``.
    Orthogonality is certified by disjoint frequency supports, or by
    disjoint time supports when ``X* A = Y* B`` holds exactly. A window
    given in one domain only is transformed to the other, where it has full
    support. ``route`` is ``"auto"``, ``"frequency"`` or ``"time"``.
    """
    _check_claim(claim)
    if route not in ("auto", "frequency", "time"):
        raise ValueError(f"unknown route {route!r}")
    _same_length(fs, gs)
    fs = [GaborGenerator.of(f) for f in fs]
    gs = [GaborGenerator.of(g) for g in gs]
    if route == "time" and any(w.time is None for w in fs + gs):
        raise MissingTimeProfile("the time route needs explicit time-domain profiles for every window")
    A, X, B, Y = (as_lattice(v, 1) for v in (A, X, B, Y))
    pairs = tuple((periodized_support(f.freq_profile(), X), periodized_support(g.freq_profile(), Y))
                  for f, g in zip(fs, gs))
    time_pairs = tuple((periodized_support(f.time_profile(), A), periodized_support(g.time_profile(), B))
                       for f, g in zip(fs, gs))
    side = X.adjoint().unshifted() * A.unshifted() == Y.adjoint().unshifted() * B.unshifted()
    sides = {"X*A == Y*B": side}
    if claim != "orthogonal":
        ok = _pairs_hold(claim, pairs) and _pairs_hold(claim, time_pairs)
        return DisjointnessVerdict(claim, _status(claim, ok), pairs, time_pairs, "both", sides,
                                   ("support agreement is necessary for similarity, never sufficient",))
    freq_ok = _pairs_hold(claim, pairs)
    time_ok = side and _pairs_hold(claim, time_pairs)
    notes = []
    if route in ("auto", "frequency") and freq_ok:
        chosen, ok = "frequency", True
    elif route in ("auto", "time") and time_ok:
        chosen, ok = "time", True
    else:
        chosen, ok = None, False
        if route != "frequency" and not side:
            notes.append("time route unavailable: X*A != Y*B")
    return DisjointnessVerdict(claim, _status(claim, ok), pairs, time_pairs, chosen, sides, tuple(notes))


# -- wavelet families -------------------------------------------------------------

def fj_family(n: int) -> list[SpectralProfile]:
    """``[p_0, ..., p_{n-1}]`` with ``p_k(xi) = p_0(4^k xi)``."""
    if n < 1:
        raise ValueError("family size must be at least 1")
    base = FrazierJawerth()
    return [dilate_profile(base, 4**k) for k in range(n)]


@dataclass(frozen=True)
class MsfCheck:
    disjoint: bool
    supports: tuple[BandSet, ...]
    overlaps: tuple[tuple[int, int], ...]

    def __bool__(self):
        return self.disjoint

    def to_report(self) -> dict:
        return {
            "kind": "Disjoint" if self.disjoint else "Overlapping",
            "certified": self.disjoint,
            "supports": {str(j + 1): format_band(s) for j, s in enumerate(self.supports)},
            "overlaps": [list(p) for p in self.overlaps],
        }


def msf_orthogonality_check(W: BandSet, dilation, j_max: int) -> MsfCheck:
    """Pairwise disjointness of the scale-``j`` periodized supports, ``1 <= j <= j_max``."""
    d = _expansive(dilation)
    if d < 0:
        raise NotExpansive("dilation must be positive")
    supports = tuple(multiplicity(W, Fraction(1) / d**j).support() for j in range(1, j_max + 1))
    overlaps = tuple(
        (j + 1, l + 1)
        for j in range(len(supports))
        for l in range(j + 1, len(supports))
        if not intersect(supports[j], supports[l]).is_empty
    )
    return MsfCheck(not overlaps, supports, overlaps)
