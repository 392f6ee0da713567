"""Lattice periodization: multiplicity functions and the sampling test.

For a band ``E`` and a sampling lattice ``A Z^d`` the multiplicity function is

    m_A(xi) = sum_k chi_E(A*^{-1}(xi + k)),   xi in [0, 1)^d,

i.e. the number of translates ``A E - k`` covering ``xi``. For diagonal
rational ``A`` it is computed exactly as a :class:`TorusStep`; general
matrices go through :func:`numeric_multiplicity`.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np

from . import _grid
from .bands import (
    BandSet,
    RationalBox,
    affine_map,
    as_fraction,
    format_fraction,
    intersect,
    normalize,
    translate,
)
from .errors import DimensionMismatch, EmptyBand, SingularMatrix, UnsupportedMatrix


def _det(matrix) -> Fraction:
    m = [list(row) for row in matrix]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for j in range(c, n):
                    m[r][j] -= f * m[c][j]
    return det


@dataclass(frozen=True)
class Lattice:
    """Sampling lattice ``A Z^d + shift`` with an exact rational matrix."""

    matrix: tuple[tuple[Fraction, ...], ...]
    shift: tuple[Fraction, ...] = ()

    def __post_init__(self):
        mat = tuple(tuple(as_fraction(v) for v in row) for row in self.matrix)
        d = len(mat)
        if d == 0 or any(len(row) != d for row in mat):
            raise DimensionMismatch("lattice matrix must be square and non-empty")
        shift = tuple(as_fraction(v) for v in self.shift) or (Fraction(0),) * d
        if len(shift) != d:
            raise DimensionMismatch("shift length differs from matrix size")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "shift", shift)
        if _det(mat) == 0:
            raise SingularMatrix("lattice matrix is singular")

    @classmethod
    def scalar(cls, a, dim: int = 1, shift=None) -> "Lattice":
        return cls.diagonal([a] * dim, shift)

    @classmethod
    def diagonal(cls, entries, shift=None) -> "Lattice":
        entries = [as_fraction(e) for e in entries]
        d = len(entries)
        mat = tuple(tuple(entries[i] if i == j else Fraction(0) for j in range(d)) for i in range(d))
        return cls(mat, tuple(shift) if shift is not None else ())

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def is_diagonal(self) -> bool:
        return all(
            v == 0 for i, row in enumerate(self.matrix) for j, v in enumerate(row) if i != j
        )

    @property
    def diag(self) -> tuple[Fraction, ...]:
        if not self.is_diagonal:
            raise UnsupportedMatrix("lattice matrix is not diagonal")
        return tuple(self.matrix[i][i] for i in range(self.dim))

    def det(self) -> Fraction:
        return _det(self.matrix)

    def adjoint(self) -> "Lattice":
        """``A*``; equal to ``A`` for the diagonal lattices the exact engine accepts."""
        t = tuple(zip(*self.matrix))
        return Lattice(t, self.shift)

    def unshifted(self) -> "Lattice":
        return Lattice(self.matrix)

    def __mul__(self, other: "Lattice") -> "Lattice":
        mat = tuple(
            tuple(sum((self.matrix[i][k] * other.matrix[k][j] for k in range(self.dim)), Fraction(0))
                  for j in range(self.dim))
            for i in range(self.dim)
        )
        return Lattice(mat)

    def __str__(self):
        if self.is_diagonal:
            d = self.diag
            body = format_fraction(d[0]) if len(set(d)) == 1 and self.dim == 1 else \
                "diag(" + ",".join(format_fraction(x) for x in d) + ")"
        else:
            body = "[" + ";".join(",".join(format_fraction(v) for v in row) for row in self.matrix) + "]"
        if any(self.shift):
            body += " + (" + ",".join(format_fraction(s) for s in self.shift) + ")"
        return body


def as_lattice(x, dim: int = 1) -> Lattice:
    if isinstance(x, Lattice):
        return x
    if isinstance(x, (list, tuple)):
        if x and isinstance(x[0], (list, tuple)):
            return Lattice(tuple(tuple(r) for r in x))
        return Lattice.diagonal(x)
    return Lattice.scalar(x, dim)


@dataclass(frozen=True)
class TorusStep:
    """Piecewise-constant function on ``[0, 1)^d``.

    ``pieces`` is the canonical partition of the unit cube into half-open
    boxes, zero-valued pieces included, in lexicographic order.
    """

    dim: int
    pieces: tuple[tuple[RationalBox, Fraction], ...]

    @classmethod
    def from_cells(cls, cuts, values, dim: int) -> "TorusStep":
        unit = [(Fraction(0), Fraction(1))] * dim
        cuts = tuple(tuple(sorted(set(c) | {Fraction(0), Fraction(1)})) for c in cuts)
        values = {k: Fraction(v) for k, v in values.items() if v}
        cuts, values = _grid.canonicalize(cuts, values, keep=unit)
        full = {
            idx: values.get(idx, Fraction(0))
            for idx in product(*(range(len(c) - 1) for c in cuts))
        }
        pieces = tuple(
            (RationalBox(lo, hi), v) for lo, hi, v in _grid.merge_cells(cuts, full)
        )
        return cls(dim, pieces)

    @classmethod
    def constant(cls, value, dim: int = 1) -> "TorusStep":
        cuts = tuple((Fraction(0), Fraction(1)) for _ in range(dim))
        return cls.from_cells(cuts, {(0,) * dim: Fraction(value)}, dim)

    @cached_property
    def _grid(self):
        cuts = _grid.collect_cuts([(b.lo, b.hi) for b, _ in self.pieces], self.dim)
        values = _grid.accumulate(cuts, [((b.lo, b.hi), v) for b, v in self.pieces])
        return cuts, values

    def __call__(self, point) -> Fraction:
        if not isinstance(point, (list, tuple)):
            point = (point,)
        pt = []
        for x in point:
            x = as_fraction(x) if not isinstance(x, float) else x
            pt.append(x - math.floor(x))
        cuts, values = self._grid
        idx = _grid.locate(cuts, pt)
        return values.get(idx, Fraction(0)) if idx is not None else Fraction(0)

    def support(self) -> BandSet:
        return normalize([b for b, v in self.pieces if v != 0], self.dim)

    def integral(self) -> Fraction:
        return sum((b.volume() * v for b, v in self.pieces), Fraction(0))

    def max(self) -> Fraction:
        return max(v for _, v in self.pieces)

    def min_nonzero(self) -> Fraction | None:
        nz = [v for _, v in self.pieces if v != 0]
        return min(nz) if nz else None

    def values(self) -> set[Fraction]:
        return {v for _, v in self.pieces}

    def is_zero(self) -> bool:
        return all(v == 0 for _, v in self.pieces)

    def __add__(self, other: "TorusStep") -> "TorusStep":
        if self.dim != other.dim:
            raise DimensionMismatch("step functions of different dimension")
        items = [((b.lo, b.hi), v) for b, v in self.pieces + other.pieces if v]
        cuts = _grid.collect_cuts(
            [(b.lo, b.hi) for b, _ in self.pieces + other.pieces], self.dim
        )
        return TorusStep.from_cells(cuts, _grid.accumulate(cuts, items), self.dim)

    def to_csv(self) -> str:
        """``dim,pieces`` header line, its values, then one row per piece."""
        buf = io.StringIO()
        buf.write("dim,pieces\n")
        buf.write(f"{self.dim},{len(self.pieces)}\n")
        for b, v in self.pieces:
            cols = []
            for l, h in zip(b.lo, b.hi):
                cols += [format_fraction(l), format_fraction(h)]
            cols.append(format_fraction(v))
            buf.write(",".join(cols) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "TorusStep":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if lines[0] != "dim,pieces":
            raise ValueError("missing 'dim,pieces' header")
        dim, n = (int(x) for x in lines[1].split(","))
        rows = lines[2:]
        if len(rows) != n:
            raise ValueError(f"expected {n} pieces, found {len(rows)}")
        items = []
        for row in rows:
            cols = [Fraction(c) for c in row.split(",")]
            lo, hi = tuple(cols[0:2 * dim:2]), tuple(cols[1:2 * dim:2])
            items.append(((lo, hi), cols[-1]))
        cuts = _grid.collect_cuts([b for b, _ in items], dim)
        return cls.from_cells(cuts, _grid.accumulate(cuts, items), dim)


def _periodize_boxes(band: BandSet, weight=1):
    """Clip every integer translate of ``band`` to the unit cube."""
    out = []
    for b in band.boxes:
        ranges = [range(math.floor(l) - 1, math.ceil(h) + 1) for l, h in zip(b.lo, b.hi)]
        for k in product(*ranges):
            lo = tuple(max(l - kk, Fraction(0)) for l, kk in zip(b.lo, k))
            hi = tuple(min(h - kk, Fraction(1)) for h, kk in zip(b.hi, k))
            if all(l < h for l, h in zip(lo, hi)):
                out.append(((lo, hi), weight))
    return out


def periodize_weighted(items, dim: int) -> TorusStep:
    """Sum of ``weight * chi_{band}(xi + k)`` over ``k``; ``items`` are ``(band, weight)`` pairs."""
    boxes = []
    for band, w in items:
        boxes += _periodize_boxes(band, w)
    cuts = _grid.collect_cuts([b for b, _ in boxes], dim, extra=[(Fraction(0), Fraction(1))] * dim)
    return TorusStep.from_cells(cuts, _grid.accumulate(cuts, boxes), dim)


def fold(band: BandSet) -> BandSet:
    """Image of ``band`` under ``x -> x mod 1`` (as a subset of ``[0, 1)^d``)."""
    return normalize(
        [RationalBox(lo, hi) for (lo, hi), _ in _periodize_boxes(band)], band.dim
    )


def multiplicity(E: BandSet, A) -> TorusStep:
    """Exact ``m_A`` for a diagonal rational lattice; any shift is ignored."""
    A = as_lattice(A, E.dim)
    if A.dim != E.dim:
        raise DimensionMismatch(f"lattice dim {A.dim} != band dim {E.dim}")
    if not A.is_diagonal:
        raise UnsupportedMatrix("exact multiplicity needs a diagonal lattice; use numeric_multiplicity")
    image = affine_map(E, A.adjoint().diag)
    return periodize_weighted([(image, 1)], E.dim)


@dataclass(frozen=True)
class NumericMultiplicity:
    """Multiplicity sampled at the cell midpoints of a uniform grid."""

    values: np.ndarray
    resolution: int
    approximate: bool = field(default=True)

    def midpoints(self) -> np.ndarray:
        return (np.arange(self.resolution) + 0.5) / self.resolution


def _inverse(matrix):
    n = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [v / piv for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def numeric_multiplicity(E: BandSet, A, resolution: int) -> NumericMultiplicity:
    """Evaluate the multiplicity sum at grid midpoints ``(i + 1/2) / resolution``.

    Works for any invertible rational matrix. Membership tests are carried out
    in integer arithmetic after clearing denominators, so points on a tile
    boundary follow the half-open convention exactly.
    """
    A = as_lattice(A, E.dim)
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    d = E.dim
    if A.dim != d:
        raise DimensionMismatch(f"lattice dim {A.dim} != band dim {d}")
    shape = (resolution,) * d
    if E.is_empty:
        return NumericMultiplicity(np.zeros(shape, dtype=np.int64), resolution)
    adj = tuple(zip(*A.matrix))
    inv = _inverse(adj)
    q = math.lcm(*(v.denominator for row in inv for v in row))
    N = np.array([[int(v * q) for v in row] for row in inv], dtype=object)
    L = math.lcm(*(v.denominator for b in E.boxes for v in b.lo + b.hi))
    scale = 2 * resolution * q * L
    lows = np.array([[int(v * scale) for v in b.lo] for b in E.boxes], dtype=object)
    highs = np.array([[int(v * scale) for v in b.hi] for b in E.boxes], dtype=object)

    # y = A*^{-1}(xi + k) with xi + k = v / (2 res); compare L * N v against scaled endpoints
    odd = np.arange(1, 2 * resolution, 2)
    grids = np.meshgrid(*([odd] * d), indexing="ij")
    base = np.stack([g.ravel() for g in grids], axis=1).astype(object)
    bb = E.bounding_box()
    corners = [tuple(c) for c in product(*zip(bb.lo, bb.hi))]
    image = [[sum(adj[i][j] * c[j] for j in range(d)) for i in range(d)] for c in corners]
    k_ranges = [
        range(math.floor(min(p[i] for p in image)) - 2, math.ceil(max(p[i] for p in image)) + 2)
        for i in range(d)
    ]
    counts = np.zeros(len(base), dtype=np.int64)
    for k in product(*k_ranges):
        v = base + np.array([2 * resolution * kk for kk in k], dtype=object)
        y = (v @ N.T) * L
        inside = np.all((y[:, None, :] >= lows) & (y[:, None, :] < highs), axis=2)
        counts += inside.any(axis=1).astype(np.int64)
    return NumericMultiplicity(counts.reshape(shape), resolution)


@dataclass(frozen=True)
class SamplingCheck:
    is_sampling: bool
    certificate: TorusStep

    def __bool__(self):
        return self.is_sampling


def is_sampling_matrix(E: BandSet, A) -> SamplingCheck:
    m = multiplicity(E, A)
    return SamplingCheck(m.max() <= 1, m)


def frame_bounds_exact(E: BandSet, A) -> tuple[Fraction, Fraction]:
    """Frame bounds of ``{T_{Az} phi_E}`` for its closed linear span."""
    A = as_lattice(A, E.dim)
    m = multiplicity(E, A)
    low = m.min_nonzero()
    if low is None:
        raise EmptyBand("multiplicity vanishes identically")
    det = abs(A.det())
    return low / det, m.max() / det


def integral(s: TorusStep) -> Fraction:
    return s.integral()


def recenter(band: BandSet) -> BandSet:
    """Move a subset of ``[0, 1)^d`` to the chart ``[-1/2, 1/2)^d``."""
    d = band.dim
    half = Fraction(1, 2)
    parts = []
    for sides in product((0, 1), repeat=d):
        lo = tuple(half * s for s in sides)
        hi = tuple(half * (s + 1) for s in sides)
        piece = intersect(band, normalize([RationalBox(lo, hi)], d))
        if not piece.is_empty:
            parts.append(translate(piece, [-s for s in sides]))
    return normalize([b for p in parts for b in p.boxes], d)
