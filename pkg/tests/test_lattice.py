from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SHANNON, bands, rationals, steps
from framerange.bands import RationalBox, affine_map, box, interval, measure, union_of
from framerange.errors import EmptyBand, SingularMatrix, UnsupportedMatrix
from framerange.lattice import (
    Lattice,
    TorusStep,
    fold,
    frame_bounds_exact,
    integral,
    is_sampling_matrix,
    multiplicity,
    numeric_multiplicity,
    recenter,
)


def _brute(E, A, xi):
    """Direct evaluation of the periodization sum at a rational point."""
    total = 0
    for k in range(-40, 41):
        total += E.contains(((xi + k) / A,))
    return total


def test_shannon_multiplicities():
    assert multiplicity(SHANNON, 1) == TorusStep.constant(1)
    m = multiplicity(SHANNON, F(1, 3))
    assert m.support() == union_of((F(1, 6), F(1, 3)), (F(2, 3), F(5, 6)))
    assert m.values() == {0, 1}
    m = multiplicity(SHANNON, F(2, 3))
    assert m.support() == interval(F(1, 3), F(2, 3)) and m.max() == 2
    assert multiplicity(SHANNON, F(1, 2)).support() == interval(F(1, 4), F(3, 4))


def test_half_step_matches_brute_force():
    m = multiplicity(SHANNON, F(1, 2))
    for n in range(0, 10000, 7):
        xi = F(2 * n + 1, 20000)
        assert m(xi) == _brute(SHANNON, F(1, 2), xi)


def test_sampling_examples():
    assert is_sampling_matrix(SHANNON, 1)
    chk = is_sampling_matrix(SHANNON, F(3, 4))
    assert not chk
    assert [(b.lo[0], b.hi[0]) for b, v in chk.certificate.pieces if v == 2] == [(F(3, 8), F(5, 8))]
    assert is_sampling_matrix(SHANNON, F(1, 3))


def test_frame_bounds_examples():
    assert frame_bounds_exact(interval(F(-1, 2), F(1, 2)), F(1, 2)) == (2, 2)
    assert frame_bounds_exact(interval(0, 1), 1) == (1, 1)
    assert frame_bounds_exact(SHANNON, F(2, 3)) == (3, 3)
    with pytest.raises(EmptyBand):
        frame_bounds_exact(interval(0, 0), 1)


def test_integral_examples():
    assert integral(multiplicity(SHANNON, F(3, 4))) == F(3, 4)
    assert integral(TorusStep.constant(1)) == 1
    assert integral(multiplicity(SHANNON, F(1, 3))) == F(1, 3)


def test_non_diagonal_rejected():
    shear = Lattice(((1, 1), (0, 1)))
    with pytest.raises(UnsupportedMatrix):
        multiplicity(box((0, 0), (1, 1)), shear)
    with pytest.raises(SingularMatrix):
        Lattice(((1, 2), (2, 4)))


def test_numeric_examples():
    nm = numeric_multiplicity(box((0, 0), (F(1, 2), F(1, 2))), Lattice.diagonal([1, 1]), 8)
    expected = np.zeros((8, 8), dtype=int)
    expected[:4, :4] = 1
    assert (nm.values == expected).all() and nm.approximate
    nm = numeric_multiplicity(box((0, 0), (1, 1)), Lattice(((1, 1), (0, 1))), 16)
    assert (nm.values == 1).all()
    exact = multiplicity(SHANNON, F(1, 3))
    nm = numeric_multiplicity(SHANNON, F(1, 3), 1200)
    mids = [F(2 * i + 1, 2400) for i in range(1200)]
    assert all(nm.values[i] == exact(x) for i, x in enumerate(mids))


def test_csv_round_trip():
    m = multiplicity(SHANNON, F(2, 3))
    text = m.to_csv()
    assert text.splitlines()[:2] == ["dim,pieces", "1,3"]
    assert text.splitlines()[2:] == ["0,1/3,0", "1/3,2/3,2", "2/3,1,0"]
    assert TorusStep.from_csv(text) == m


def test_recenter_chart():
    assert recenter(union_of((0, F(1, 8)), (F(7, 8), 1))) == interval(F(-1, 8), F(1, 8))


@given(bands(), steps)
def test_integral_identity(E, a):
    assert integral(multiplicity(E, a)) == a * measure(E)


@given(bands(), steps, rationals())
def test_shift_is_ignored(E, a, k0):
    assert multiplicity(E, Lattice.scalar(a, shift=[k0])) == multiplicity(E, a)


@given(bands(), steps)
def test_support_is_folded_image(E, a):
    assert multiplicity(E, a).support() == fold(affine_map(E, a))


@given(bands(nonempty=True), steps)
def test_sampling_implies_tight(E, a):
    if is_sampling_matrix(E, a):
        assert frame_bounds_exact(E, a) == (1 / a, 1 / a)


@given(bands(), steps, st.integers(64, 256))
def test_numeric_agrees_off_breakpoints(E, a, res):
    m = multiplicity(E, a)
    nm = numeric_multiplicity(E, a, res)
    breaks = {b.lo[0] for b, _ in m.pieces}
    for i in range(res):
        lo, hi = F(i, res), F(i + 1, res)
        if any(lo < c < hi for c in breaks):
            continue
        assert nm.values[i] == m(F(2 * i + 1, 2 * res))


@given(st.lists(st.tuples(rationals(-2, 2, (1, 2, 4)), rationals(-2, 2, (1, 2, 4))), max_size=3),
       steps, steps)
def test_2d_integral_identity(pairs, a, b):
    raw = [RationalBox((min(x, y), F(0)), (max(x, y), F(1))) for x, y in pairs]
    from framerange.bands import normalize
    E = normalize(raw, 2)
    assert integral(multiplicity(E, Lattice.diagonal([a, b]))) == a * b * measure(E)
