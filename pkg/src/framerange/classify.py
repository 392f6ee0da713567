"""Range relations between sampling transforms, read off multiplicity supports.

Single sampling lattices give biconditional verdicts. Generators that are
only Bessel (non-sampling lattices) and ordered unions of lattices only give
one-directional information, and the verdict types record which direction
was certified instead of collapsing everything to booleans.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Sequence

from .bands import BandSet, Relation, difference, empty, format_band, format_fraction, intersect, relation
from .errors import EmptyList, NotSamplingMatrix
from .lattice import as_lattice, multiplicity

log = logging.getLogger(__name__)


class RangeKind(enum.Enum):
    EQUAL = "Equal"
    ORTHOGONAL = "Orthogonal"
    FIRST_INSIDE_SECOND = "FirstInsideSecond"
    SECOND_INSIDE_FIRST = "SecondInsideFirst"
    NONTRIVIAL_OVERLAP = "NontrivialOverlap"


_FROM_SETS = {
    Relation.EQUAL: RangeKind.EQUAL,
    Relation.DISJOINT: RangeKind.ORTHOGONAL,
    Relation.SUBSET_PROPER: RangeKind.FIRST_INSIDE_SECOND,
    Relation.SUPERSET_PROPER: RangeKind.SECOND_INSIDE_FIRST,
    Relation.OVERLAPPING: RangeKind.NONTRIVIAL_OVERLAP,
}

_MIRROR = {
    RangeKind.FIRST_INSIDE_SECOND: RangeKind.SECOND_INSIDE_FIRST,
    RangeKind.SECOND_INSIDE_FIRST: RangeKind.FIRST_INSIDE_SECOND,
}


@dataclass(frozen=True)
class RangeRelation:
    """Relation between two analysis-operator ranges plus its certificates.

    ``grading`` is ``"iff"`` for frame pairs (the kind is decided),
    ``"sufficient"`` when orthogonality is certified for Bessel pairs,
    ``"necessary"`` when only a necessary condition for equality or
    containment was checked, and ``"inconclusive"`` when the supports
    overlap and no statement about the ranges follows.
    """

    kind: RangeKind
    first_support: BandSet
    second_support: BandSet
    grading: str = "iff"

    @property
    def certified(self) -> bool:
        return self.grading in ("iff", "sufficient")

    @property
    def intersection(self) -> BandSet:
        return intersect(self.first_support, self.second_support)

    @property
    def first_minus_second(self) -> BandSet:
        return difference(self.first_support, self.second_support)

    @property
    def second_minus_first(self) -> BandSet:
        return difference(self.second_support, self.first_support)

    def mirror(self) -> "RangeRelation":
        return RangeRelation(
            _MIRROR.get(self.kind, self.kind), self.second_support, self.first_support, self.grading
        )

    def to_report(self) -> dict:
        return {
            "kind": self.kind.value,
            "certified": self.certified,
            "grading": self.grading,
            "supports": [format_band(self.first_support), format_band(self.second_support)],
            "intersection": format_band(self.intersection),
            "measures": {
                "first": format_fraction(self.first_support.measure()),
                "second": format_fraction(self.second_support.measure()),
                "intersection": format_fraction(self.intersection.measure()),
                "symdiff": format_fraction(
                    self.first_minus_second.measure() + self.second_minus_first.measure()
                ),
            },
        }


def _kind(X: BandSet, Y: BandSet) -> RangeKind:
    return _FROM_SETS[relation(X, Y)]


def range_support(E: BandSet, A) -> BandSet:
    return multiplicity(E, as_lattice(A, E.dim)).support()


def classify_single(E: BandSet, A, F: BandSet, B) -> RangeRelation:
    """Decide the relation between the ranges of two sampling transforms."""
    mA = multiplicity(E, as_lattice(A, E.dim))
    mB = multiplicity(F, as_lattice(B, F.dim))
    if mA.max() > 1:
        raise NotSamplingMatrix(
            f"first pair is not a sampling pair (multiplicity reaches {mA.max()}); use classify_bessel",
            which="first",
        )
    if mB.max() > 1:
        raise NotSamplingMatrix(
            f"second pair is not a sampling pair (multiplicity reaches {mB.max()}); use classify_bessel",
            which="second",
        )
    X, Y = mA.support(), mB.support()
    return RangeRelation(_kind(X, Y), X, Y, "iff")


def _bessel_relation(X: BandSet, Y: BandSet) -> RangeRelation:
    kind = _kind(X, Y)
    if kind is RangeKind.ORTHOGONAL:
        grading = "sufficient"
    elif kind is RangeKind.NONTRIVIAL_OVERLAP:
        grading = "inconclusive"
    else:
        grading = "necessary"
    return RangeRelation(kind, X, Y, grading)


def classify_bessel(E: BandSet, A, F: BandSet, B) -> RangeRelation:
    """Support comparison for generators that need not be sampling.

    Orthogonality is certified; equality and containment are reported as
    necessary conditions only.
    """
    return _bessel_relation(range_support(E, A), range_support(F, B))


class Overall(enum.Enum):
    CERTIFIED_ORTHOGONAL = "CertifiedOrthogonal"
    NECESSARY_CONDITIONS_HOLD = "NecessaryConditionsHold"
    VIOLATED = "Violated"


CLAIMS = ("equal", "orthogonal", "contained", "overlap")


@dataclass(frozen=True)
class UnionVerdict:
    coordinates: tuple[RangeRelation, ...]
    overall: Overall
    claim: str
    padded: int = 0
    notes: tuple[str, ...] = field(default=())

    @property
    def certified(self) -> bool:
        return self.overall is Overall.CERTIFIED_ORTHOGONAL

    def to_report(self) -> dict:
        return {
            "kind": self.overall.value,
            "claim": self.claim,
            "certified": self.certified,
            "padded_coordinates": self.padded,
            "coordinates": [c.to_report() for c in self.coordinates],
            "notes": list(self.notes),
        }


def _overall(claim: str, coords: Sequence[RangeRelation]) -> Overall:
    kinds = [c.kind for c in coords]
    if claim == "orthogonal":
        ok = all(k is RangeKind.ORTHOGONAL for k in kinds)
        return Overall.CERTIFIED_ORTHOGONAL if ok else Overall.VIOLATED
    if claim == "equal":
        ok = all(k is RangeKind.EQUAL for k in kinds)
    elif claim == "contained":
        ok = all(c.first_minus_second.is_empty for c in coords)
    elif claim == "overlap":
        ok = any(not c.intersection.is_empty for c in coords)
    else:
        raise ValueError(f"unknown claim {claim!r}; expected one of {CLAIMS}")
    return Overall.NECESSARY_CONDITIONS_HOLD if ok else Overall.VIOLATED


def classify_union(E: BandSet, As: Sequence, F: BandSet, Bs: Sequence, claim: str) -> UnionVerdict:
    """Coordinate-wise comparison of ordered unions of lattices.

    The shorter list is padded with zero transforms, whose range support is
    empty and therefore orthogonal to everything. That the lists are jointly
    sets of sampling is taken on trust.
    """
    if not As or not Bs:
        raise EmptyList("both lattice lists must be non-empty")
    if claim not in CLAIMS:
        raise ValueError(f"unknown claim {claim!r}; expected one of {CLAIMS}")
    X = [range_support(E, a) for a in As]
    Y = [range_support(F, b) for b in Bs]
    n = max(len(X), len(Y))
    padded = 2 * n - len(X) - len(Y)
    X += [empty(E.dim)] * (n - len(X))
    Y += [empty(F.dim)] * (n - len(Y))
    coords = tuple(_bessel_relation(x, y) for x, y in zip(X, Y))
    notes = ["joint sampling of each lattice list is asserted by the caller, not verified"]
    if not any(multiplicity(E, as_lattice(a, E.dim)).max() <= 1 for a in As):
        log.warning("no lattice in the first list samples E on its own; joint sampling unverified")
    return UnionVerdict(coords, _overall(claim, coords), claim, padded, tuple(notes))
