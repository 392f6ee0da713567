from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SHANNON, bands, boxes2d, rationals, raw_intervals
from framerange.bands import (
    RationalBox,
    Relation,
    affine_map,
    as_fraction,
    boolean_op,
    box,
    difference,
    empty,
    format_band,
    interval,
    intersect,
    measure,
    normalize,
    parse_band,
    relation,
    symdiff,
    union,
    union_of,
)
from framerange.errors import DimensionMismatch, ParseError, SingularMatrix, UnboundedBand


def test_adjacent_intervals_merge():
    assert normalize([RationalBox.interval(0, 1), RationalBox.interval(1, 2)], 1) == interval(0, 2)


def test_empty_normal_form():
    e = normalize([], 1)
    assert e.is_empty and measure(e) == 0


def test_shannon_is_sorted():
    b = normalize([RationalBox.interval(F(1, 2), 1), RationalBox.interval(-1, F(-1, 2))], 1)
    assert b.intervals() == [(-1, F(-1, 2)), (F(1, 2), 1)]


def test_displayed_supports_are_disjoint():
    a = union_of((F(1, 6), F(1, 3)), (F(2, 3), F(5, 6)))
    assert intersect(a, interval(F(1, 3), F(2, 3))).is_empty


def test_difference_example():
    assert difference(interval(0, 1), interval(F(1, 4), F(3, 4))) == union_of((0, F(1, 4)), (F(3, 4), 1))


def test_measures():
    assert measure(SHANNON) == 1
    assert measure(union_of((F(1, 6), F(1, 3)), (F(2, 3), F(5, 6)))) == F(1, 3)


def test_affine_examples():
    assert affine_map(SHANNON, F(3, 4)) == union_of((F(-3, 4), F(-3, 8)), (F(3, 8), F(3, 4)))
    assert affine_map(SHANNON, 1, 0) == SHANNON
    assert affine_map(interval(F(1, 3), F(2, 3)), F(-1, 2)) == interval(F(-1, 3), F(-1, 6))
    with pytest.raises(SingularMatrix):
        affine_map(SHANNON, 0)


def test_relation_examples():
    a = union_of((F(1, 6), F(1, 3)), (F(2, 3), F(5, 6)))
    assert relation(a, interval(F(1, 3), F(2, 3))) is Relation.DISJOINT
    assert relation(SHANNON, SHANNON) is Relation.EQUAL
    assert relation(interval(F(1, 2), 1), interval(0, 1)) is Relation.SUBSET_PROPER
    assert relation(interval(0, 1), interval(F(1, 2), 1)) is Relation.SUPERSET_PROPER
    assert relation(interval(0, 1), interval(F(1, 2), 2)) is Relation.OVERLAPPING
    assert relation(empty(), interval(0, 1)) is Relation.DISJOINT


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        union(interval(0, 1), box((0, 0), (1, 1)))
    with pytest.raises(DimensionMismatch):
        normalize([RationalBox((0, 0), (1, 1))], 1)


def test_exactness_guards():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(UnboundedBand):
        parse_band("[0,inf)")
    with pytest.raises(ParseError):
        parse_band("[0,1]")


def test_text_format():
    assert format_band(SHANNON) == "dim=1; [-1,-1/2) u [1/2,1)"
    assert parse_band("[-1,-1/2) u [1/2,1)") == SHANNON
    assert format_band(empty(2)) == "dim=2; empty"
    b = box((0, F(1, 2)), (1, 1))
    assert parse_band(format_band(b)) == b


def _indicator(raw, x):
    return any(b.contains(x) for b in raw)


def _probe_points(*sets):
    # midpoints between consecutive cut coordinates avoid every boundary
    cuts = sorted({v for s in sets for b in s for v in (b.lo[0], b.hi[0])} | {F(-4), F(4)})
    return [(a + b) / 2 for a, b in zip(cuts, cuts[1:])]


@given(raw_intervals())
def test_normalize_idempotent_and_faithful(raw):
    n = normalize(raw, 1)
    assert normalize(n.boxes, 1) == n
    for x in _probe_points(raw):
        assert n.contains((x,)) == _indicator(raw, (x,))
    ivals = n.intervals()
    assert all(h < l2 for (_, h), (l2, _) in zip(ivals, ivals[1:]))


@given(raw_intervals(), raw_intervals())
def test_same_indicator_same_normal_form(raw, extra):
    # re-splitting boxes at arbitrary points must not change the normal form
    n = normalize(raw, 1)
    pieces = []
    for b in raw:
        mid = (b.lo[0] + b.hi[0]) / 2
        pieces += [RationalBox.interval(b.lo[0], mid), RationalBox.interval(mid, b.hi[0])]
    assert normalize(pieces + raw, 1) == n


@given(bands(), bands())
def test_inclusion_exclusion(a, b):
    assert measure(union(a, b)) + measure(intersect(a, b)) == measure(a) + measure(b)


@given(bands(), rationals(denoms=(1, 2, 3)).filter(lambda s: s != 0), rationals())
def test_affine_scales_measure(a, s, t):
    assert measure(affine_map(a, s, t)) == abs(s) * measure(a)


@given(bands(), bands(), st.sampled_from(["union", "intersect", "difference", "symdiff"]))
def test_boolean_ops_pointwise(a, b, op):
    out = boolean_op(a, b, op)
    fn = {"union": lambda x, y: x or y, "intersect": lambda x, y: x and y,
          "difference": lambda x, y: x and not y, "symdiff": lambda x, y: x != y}[op]
    for x in _probe_points(a.boxes, b.boxes):
        assert out.contains((x,)) == fn(a.contains((x,)), b.contains((x,)))


@given(bands())
def test_symdiff_self_empty(a):
    assert symdiff(a, a).is_empty


@given(bands())
def test_text_round_trip(a):
    assert parse_band(format_band(a)) == a
    assert format_band(parse_band(format_band(a))) == format_band(a)


@given(boxes2d(), boxes2d())
def test_2d_canonical_and_measure(raw1, raw2):
    a, b = normalize(raw1, 2), normalize(raw2, 2)
    assert normalize(a.boxes, 2) == a
    assert measure(union(a, b)) + measure(intersect(a, b)) == measure(a) + measure(b)
    xs = _probe_points([RationalBox((bx.lo[0],), (bx.hi[0],)) for bx in raw1 + raw2])
    ys = _probe_points([RationalBox((bx.lo[1],), (bx.hi[1],)) for bx in raw1 + raw2])
    for x in xs[::2]:
        for y in ys[::2]:
            assert union(a, b).contains((x, y)) == (_indicator(raw1, (x, y)) or _indicator(raw2, (x, y)))
