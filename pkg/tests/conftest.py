from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from framerange.bands import RationalBox, normalize, union_of

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SHANNON = union_of((-1, Fraction(-1, 2)), (Fraction(1, 2), 1))

DENOMS = (1, 2, 3, 4, 5, 6, 8, 12)


@st.composite
def rationals(draw, lo=-3, hi=3, denoms=DENOMS):
    q = draw(st.sampled_from(denoms))
    n = draw(st.integers(lo * q, hi * q))
    return Fraction(n, q)


@st.composite
def raw_intervals(draw, max_boxes=4):
    out = []
    for _ in range(draw(st.integers(0, max_boxes))):
        a, b = draw(rationals()), draw(rationals())
        out.append(RationalBox.interval(min(a, b), max(a, b)))
    return out


@st.composite
def bands(draw, max_boxes=4, nonempty=False):
    raw = draw(raw_intervals(max_boxes))
    band = normalize(raw, 1)
    if nonempty and band.is_empty:
        a = draw(rationals())
        band = normalize([RationalBox.interval(a, a + Fraction(1, draw(st.sampled_from(DENOMS))))], 1)
    return band


@st.composite
def boxes2d(draw, max_boxes=3):
    out = []
    for _ in range(draw(st.integers(0, max_boxes))):
        lo, hi = [], []
        for _ in range(2):
            a, b = draw(rationals(-2, 2, (1, 2, 3, 4))), draw(rationals(-2, 2, (1, 2, 3, 4)))
            lo.append(min(a, b))
            hi.append(max(a, b))
        out.append(RationalBox(tuple(lo), tuple(hi)))
    return out


steps = st.builds(Fraction, st.integers(1, 12), st.integers(1, 12))
