from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SHANNON
from framerange.bands import interval
from framerange.discrete import (
    NORM_CONVENTION,
    build_model,
    collisions,
    cross_gram,
    frame_bounds_numeric,
    least_squares_reconstruct,
    multiplex_roundtrip,
    projections_commutator,
    range_basis,
    reconstruct_closed_form,
    resolving_period,
    vector_from_csv,
    vector_to_csv,
)
from framerange.errors import EmptyBandGrid, Incommensurable, NotDisjoint, NotTight, PeriodMismatch
from framerange.lattice import frame_bounds_exact

QUARTER = interval(F(-1, 4), F(1, 4))
rng = np.random.default_rng(5)


def _cvec(n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


def test_build_examples():
    m = build_model(interval(0, 1), 1, 1)
    assert m.M == 1 and np.allclose(m.matrix, [[1]])
    m = build_model(SHANNON, F(1, 3), 3)
    assert m.M == 9 and m.frequencies == (-3, -2, 2)
    m = build_model(SHANNON, 1, 4)
    assert m.M == 4 and m.frequencies == (-4, -3, 2, 3)


def test_build_errors():
    with pytest.raises(Incommensurable):
        build_model(SHANNON, F(1, 3), F(1, 2))
    with pytest.raises(EmptyBandGrid) as info:
        build_model(interval(F(1, 4), F(1, 2)), 1, 1)
    assert info.value.suggested_period == 3


def test_frame_bound_examples():
    assert np.allclose(frame_bounds_numeric(build_model(interval(F(-1, 2), F(1, 2)), F(1, 2), 2)), (2, 2), atol=1e-9)
    assert np.allclose(frame_bounds_numeric(build_model(interval(0, 1), 1, 1)), (1, 1), atol=1e-12)
    assert np.allclose(frame_bounds_numeric(build_model(SHANNON, F(2, 3), 6)), (3, 3), atol=1e-9)


def test_cross_gram_examples():
    m1, m2 = build_model(SHANNON, F(1, 3), 6), build_model(QUARTER, F(1, 2), 6)
    assert cross_gram(m1, m2) <= 1e-12
    assert collisions(m1, m2) == []
    assert cross_gram(m1, m1) == pytest.approx(frame_bounds_numeric(m1)[1], abs=1e-9)
    a, b = build_model(SHANNON, 1, 4), build_model(interval(F(1, 2), 1), 1, 4)
    assert cross_gram(a, b) > 0.5
    with pytest.raises(PeriodMismatch):
        cross_gram(m1, build_model(SHANNON, 1, 4))


def test_commutator_examples():
    m1, m2 = build_model(SHANNON, F(1, 3), 6), build_model(QUARTER, F(1, 2), 6)
    assert projections_commutator(m1, m2) <= 1e-10
    assert projections_commutator(m1, m1) <= 1e-12
    assert projections_commutator(build_model(SHANNON, 1, 4), build_model(interval(F(1, 2), 1), 1, 4)) <= 1e-10


def test_mux_examples():
    m1, m2 = build_model(SHANNON, F(1, 3), 12), build_model(QUARTER, F(1, 2), 12)
    f, g = _cvec(len(m1.frequencies)), _cvec(len(m2.frequencies))
    res = multiplex_roundtrip(m1, f, m2, g)
    assert res.crosstalk <= 1e-9
    res = multiplex_roundtrip(m1, f, m2, np.zeros(len(m2.frequencies)))
    assert np.allclose(res.f, f, atol=1e-10)
    s1, s2 = build_model(SHANNON, 1, 12), build_model(SHANNON, 1, 12)
    with pytest.raises(NotDisjoint):
        multiplex_roundtrip(s1, f[: len(s1.frequencies)], s2, g[: len(s2.frequencies)])
    n = len(s1.frequencies)
    assert multiplex_roundtrip(s1, _cvec(n), s2, _cvec(n), force=True).crosstalk >= 0.1


def test_closed_form_examples():
    for E, a, P in [(interval(F(-1, 2), F(1, 2)), F(1, 2), 2), (interval(0, 1), 1, 1), (SHANNON, F(1, 3), 6)]:
        m = build_model(E, a, P)
        c = _cvec(len(m.frequencies))
        s = m.matrix @ c
        assert np.allclose(reconstruct_closed_form(m, s), least_squares_reconstruct(m, s), atol=1e-9)
        assert np.allclose(reconstruct_closed_form(m, s), c, atol=1e-9)
    with pytest.raises(NotTight):
        reconstruct_closed_form(build_model(SHANNON, F(2, 3), 6), np.zeros(9))


def test_dumps():
    m = build_model(SHANNON, F(1, 3), 3)
    d = m.to_dict()
    assert d["M"] == 9 and d["frequencies"] == [-3, -2, 2] and d["norm_convention"] == NORM_CONVENTION
    v = _cvec(5)
    assert np.array_equal(vector_from_csv(vector_to_csv(v)), v)


def test_resolving_period():
    assert resolving_period(SHANNON, F(1, 3), QUARTER, F(1, 2)) == 4


models = st.sampled_from([
    (SHANNON, F(1, 3), 6), (SHANNON, F(2, 3), 6), (SHANNON, 1, 4), (QUARTER, F(1, 2), 4),
    (interval(F(-1, 2), F(1, 2)), F(1, 2), 2), (interval(0, F(3, 4)), F(1, 4), 8),
])


@given(models, st.integers(0, 2**31))
def test_parseval_sandwich(spec, seed):
    m = build_model(*spec)
    c1, c2 = frame_bounds_numeric(m)
    r = np.random.default_rng(seed)
    # the lower bound holds on the orthogonal complement of the kernel
    row_space = range_basis(m.matrix.conj().T)
    for _ in range(100):
        f = r.normal(size=len(m.frequencies)) + 1j * r.normal(size=len(m.frequencies))
        f = row_space @ (row_space.conj().T @ f)
        e = np.linalg.norm(m.matrix @ f) ** 2
        n = np.linalg.norm(f) ** 2
        assert c1 * n * (1 - 1e-9) <= e <= c2 * n * (1 + 1e-9)


@given(models)
def test_refinement_stability(spec):
    E, a, P = spec
    m, m2 = build_model(E, a, P), build_model(E, a, 2 * P)
    assert {F(n, 1) / m.period for n in m.frequencies} <= {F(n, 1) / m2.period for n in m2.frequencies}
    exact = frame_bounds_exact(E, a)
    for mm in (m, m2):
        if mm.resolves():
            assert np.allclose(frame_bounds_numeric(mm), [float(x) for x in exact], atol=1e-9)
