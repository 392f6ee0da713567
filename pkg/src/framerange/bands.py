"""Exact set algebra on finite unions of half-open rational boxes.

Bands, supports and periodized supports are all :class:`BandSet` values.
Every endpoint is a :class:`fractions.Fraction`; nothing in this module
touches floating point. A ``BandSet`` is always held in normal form, so two
sets with the same indicator function compare equal with ``==``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import _grid
from .errors import DimensionMismatch, ParseError, SingularMatrix, UnboundedBand


def as_fraction(x) -> Fraction:
    """Exact conversion; floats are rejected to keep arithmetic exact."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if s.lower().lstrip("+-") in ("inf", "infinity", "oo", "nan"):
            raise UnboundedBand(f"non-finite endpoint {x!r}")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {x!r}") from exc
    if isinstance(x, float):
        raise TypeError(f"float {x!r} given where an exact rational is required")
    return Fraction(x)


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, order=True)
class RationalBox:
    lo: tuple[Fraction, ...]
    hi: tuple[Fraction, ...]

    def __post_init__(self):
        lo = tuple(as_fraction(v) for v in self.lo)
        hi = tuple(as_fraction(v) for v in self.hi)
        if len(lo) != len(hi):
            raise DimensionMismatch("lo and hi have different lengths")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def interval(cls, lo, hi) -> "RationalBox":
        return cls((lo,), (hi,))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def empty(self) -> bool:
        return any(l >= h for l, h in zip(self.lo, self.hi))

    def volume(self) -> Fraction:
        v = Fraction(1)
        for l, h in zip(self.lo, self.hi):
            v *= max(h - l, Fraction(0))
        return v

    def contains(self, point) -> bool:
        return all(l <= x < h for l, x, h in zip(self.lo, point, self.hi))

    def __str__(self):
        return "x".join(
            f"[{format_fraction(l)},{format_fraction(h)})" for l, h in zip(self.lo, self.hi)
        )


@dataclass(frozen=True)
class BandSet:
    """Finite union of half-open rational boxes, held in normal form.

    Build instances with :func:`normalize` (or the helpers :func:`interval`,
    :func:`union_of`, :func:`parse_band`); the raw constructor assumes its
    input is already normal.
    """

    boxes: tuple[RationalBox, ...]
    dim: int

    @cached_property
    def _grid(self):
        cuts = _grid.collect_cuts([(b.lo, b.hi) for b in self.boxes], self.dim)
        cells = _grid.accumulate(cuts, [((b.lo, b.hi), True) for b in self.boxes])
        return cuts, cells

    @property
    def is_empty(self) -> bool:
        return not self.boxes

    def measure(self) -> Fraction:
        return measure(self)

    def contains(self, point) -> bool:
        point = tuple(as_fraction(p) if not isinstance(p, float) else p for p in point)
        return any(b.contains(point) for b in self.boxes)

    def bounding_box(self) -> RationalBox | None:
        if not self.boxes:
            return None
        lo = tuple(min(b.lo[i] for b in self.boxes) for i in range(self.dim))
        hi = tuple(max(b.hi[i] for b in self.boxes) for i in range(self.dim))
        return RationalBox(lo, hi)

    def intervals(self) -> list[tuple[Fraction, Fraction]]:
        """``(lo, hi)`` pairs of a one-dimensional set."""
        if self.dim != 1:
            raise DimensionMismatch("intervals() needs a one-dimensional set")
        return [(b.lo[0], b.hi[0]) for b in self.boxes]

    def __or__(self, other):
        return boolean_op(self, other, "union")

    def __and__(self, other):
        return boolean_op(self, other, "intersect")

    def __sub__(self, other):
        return boolean_op(self, other, "difference")

    def __xor__(self, other):
        return boolean_op(self, other, "symdiff")

    def __str__(self):
        return format_band(self)


def _from_cells(cuts, cells, dim) -> BandSet:
    cuts, cells = _grid.canonicalize(cuts, cells)
    boxes = tuple(RationalBox(lo, hi) for lo, hi, _ in _grid.merge_cells(cuts, cells))
    return BandSet(boxes, dim)


def normalize(raw: Iterable[RationalBox], dim: int) -> BandSet:
    raw = list(raw)
    for b in raw:
        if b.dim != dim:
            raise DimensionMismatch(f"box {b} has dimension {b.dim}, expected {dim}")
    raw = [b for b in raw if not b.empty]
    if not raw:
        return BandSet((), dim)
    cuts = _grid.collect_cuts([(b.lo, b.hi) for b in raw], dim)
    cells = _grid.accumulate(cuts, [((b.lo, b.hi), True) for b in raw])
    cells = {k: True for k in cells}
    return _from_cells(cuts, cells, dim)


def empty(dim: int = 1) -> BandSet:
    return BandSet((), dim)


def interval(lo, hi) -> BandSet:
    return normalize([RationalBox.interval(lo, hi)], 1)


def union_of(*pairs: Sequence) -> BandSet:
    """One-dimensional band from ``(lo, hi)`` pairs."""
    return normalize([RationalBox.interval(lo, hi) for lo, hi in pairs], 1)


def box(lo: Sequence, hi: Sequence) -> BandSet:
    return normalize([RationalBox(tuple(lo), tuple(hi))], len(lo))


def unit_cube(dim: int = 1) -> BandSet:
    return box((0,) * dim, (1,) * dim)


_OPS = {
    "union": lambda x, y: x or y,
    "intersect": lambda x, y: x and y,
    "difference": lambda x, y: x and not y,
    "symdiff": lambda x, y: x != y,
}


def boolean_op(a: BandSet, b: BandSet, op: str) -> BandSet:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions {a.dim} and {b.dim} differ")
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown set operation {op!r}") from None
    if a.is_empty and b.is_empty:
        return empty(a.dim)
    ca, va = a._grid
    cb, vb = b._grid
    if not ca[0]:
        ca = cb
    if not cb[0]:
        cb = ca
    cuts = _grid.merge_cuts(ca, cb)
    ra = _grid.restrict_sparse(ca, va, cuts) if va else {}
    rb = _grid.restrict_sparse(cb, vb, cuts) if vb else {}
    cells = {}
    for idx in set(ra) | set(rb):
        if fn(idx in ra, idx in rb):
            cells[idx] = True
    return _from_cells(cuts, cells, a.dim)


def union(a, b):
    return boolean_op(a, b, "union")


def intersect(a, b):
    return boolean_op(a, b, "intersect")


def difference(a, b):
    return boolean_op(a, b, "difference")


def symdiff(a, b):
    return boolean_op(a, b, "symdiff")


def measure(a: BandSet) -> Fraction:
    return sum((b.volume() for b in a.boxes), Fraction(0))


def _diagonal(scale, dim) -> tuple[Fraction, ...]:
    if isinstance(scale, (list, tuple)):
        diag = tuple(as_fraction(s) for s in scale)
    else:
        diag = (as_fraction(scale),) * dim
    if len(diag) != dim:
        raise DimensionMismatch(f"scale has {len(diag)} entries for dimension {dim}")
    return diag


def affine_map(a: BandSet, scale=1, shift=None) -> BandSet:
    """Image ``{scale * x + shift}`` under a diagonal rational map.

    ``scale`` is a scalar or a sequence of diagonal entries. Negative entries
    flip orientation; the image is re-expressed with half-open boxes, which
    only moves measure-zero boundary points.
    """
    diag = _diagonal(scale, a.dim)
    if any(s == 0 for s in diag):
        raise SingularMatrix("diagonal scale has a zero entry")
    off = (Fraction(0),) * a.dim if shift is None else _diagonal(shift, a.dim)
    out = []
    for b in a.boxes:
        lo, hi = [], []
        for l, h, s, t in zip(b.lo, b.hi, diag, off):
            x, y = s * l + t, s * h + t
            lo.append(min(x, y))
            hi.append(max(x, y))
        out.append(RationalBox(tuple(lo), tuple(hi)))
    return normalize(out, a.dim)


def translate(a: BandSet, shift) -> BandSet:
    return affine_map(a, 1, shift)


class Relation(enum.Enum):
    EQUAL = "Equal"
    SUBSET_PROPER = "SubsetProper"
    SUPERSET_PROPER = "SupersetProper"
    DISJOINT = "Disjoint"
    OVERLAPPING = "Overlapping"


def relation(a: BandSet, b: BandSet) -> Relation:
    """Set relation modulo null sets.

    Precedence is Equal, Disjoint, SubsetProper, SupersetProper: an empty set
    against a non-empty one is reported as Disjoint.
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions {a.dim} and {b.dim} differ")
    if a == b:
        return Relation.EQUAL
    if intersect(a, b).is_empty:
        return Relation.DISJOINT
    if difference(a, b).is_empty:
        return Relation.SUBSET_PROPER
    if difference(b, a).is_empty:
        return Relation.SUPERSET_PROPER
    return Relation.OVERLAPPING


# -- text format ---------------------------------------------------------------

def format_band(a: BandSet) -> str:
    body = " u ".join(str(b) for b in a.boxes) if a.boxes else "empty"
    return f"dim={a.dim}; {body}"


_NUM = r"\s*([+-]?\d+(?:/\d+)?|[+-]?inf(?:inity)?|[+-]?oo)\s*"
_IVAL = re.compile(r"\[" + _NUM + "," + _NUM + r"\)")


def parse_band(text: str, dim: int | None = None) -> BandSet:
    """Parse ``dim=1; [-1,-1/2) u [1/2,1)``.

    The ``dim=`` prefix is optional when ``dim`` is passed or the boxes make
    it unambiguous. Boxes in ``d > 1`` are written ``[a,b)x[c,d)``.
    """
    s = text.strip()
    m = re.match(r"dim\s*=\s*(\d+)\s*;?", s)
    if m:
        declared = int(m.group(1))
        if dim is not None and dim != declared:
            raise DimensionMismatch(f"declared dim={declared}, expected {dim}")
        dim = declared
        s = s[m.end():].strip()
    if s in ("", "empty", "{}"):
        if dim is None:
            dim = 1
        if dim < 1:
            raise ParseError("dimension must be positive")
        return empty(dim)
    raw = []
    for part in re.split(r"\s*(?:\bu\b|∪|\|)\s*", s):
        part = part.strip()
        if not part:
            raise ParseError(f"empty term in band {text!r}")
        factors = re.split(r"\s*[x×]\s*(?=\[)", part)
        lo, hi = [], []
        for f in factors:
            fm = _IVAL.fullmatch(f.strip())
            if not fm:
                raise ParseError(f"cannot parse interval {f!r} in band {text!r}")
            l, h = as_fraction(fm.group(1)), as_fraction(fm.group(2))
            lo.append(l)
            hi.append(h)
        raw.append(RationalBox(tuple(lo), tuple(hi)))
    if dim is None:
        dim = raw[0].dim
    if dim < 1:
        raise ParseError("dimension must be positive")
    return normalize(raw, dim)
