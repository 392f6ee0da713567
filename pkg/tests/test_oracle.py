from fractions import Fraction as F

import numpy as np
import pytest

from framerange.bands import interval
from framerange.generators import affine_verdict, fj_family, wh_verdict
from framerange.oracle import (
    cross_correlation,
    finite_group_gabor_sum,
    gabor_cross_correlation,
    quadrature_nodes,
    random_bump_sum,
    random_sinc_sum,
)
from framerange.profiles import Bump, Characteristic, MeyerBell


def test_quadrature_integrates_polynomials():
    x, w = quadrature_nodes(0.0, 1.0, [0.3], 0.1)
    assert np.sum(w * x**7) == pytest.approx(1 / 8, abs=1e-14)


def test_frequency_disjoint_bumps():
    rng = np.random.default_rng(0)
    p, q = Bump(interval(0, F(1, 4))), Bump(interval(F(1, 2), F(3, 4)))
    assert wh_verdict([p], 1, 1, [q], 1, 1).certified
    for _ in range(3):
        h1, h2 = random_bump_sum(rng, -2, 2), random_bump_sum(rng, -2, 2)
        assert abs(cross_correlation(h1, h2, [p], [q], 1, Z=64)) <= 1e-6
    # positive control: same window gives a clearly non-zero correlation
    assert abs(cross_correlation(h1, h1, [p], [p], 1, Z=64)) > 1e-3


def test_meyer_oversampled_oracle():
    rng = np.random.default_rng(1)
    M = MeyerBell()
    assert affine_verdict([M], F(1, 3), [M], F(1, 13)).certified
    h1, h2 = random_bump_sum(rng, -2, 2), random_bump_sum(rng, -2, 2)
    # the polynomial bell is only finitely smooth, so the cutoff grows with the coarse step
    assert abs(cross_correlation(h1, h2, [M], [M], F(1, 3), Z=256, step2=F(1, 13))) <= 1e-6


def test_fj_pair_oracle():
    rng = np.random.default_rng(2)
    fam = fj_family(2)
    h1, h2 = random_bump_sum(rng, -1, 1), random_bump_sum(rng, -1, 1)
    assert abs(cross_correlation(h1, h2, [fam[0]], [fam[1]], 1, Z=64)) <= 1e-6


def test_time_disjoint_gabor_oracle():
    rng = np.random.default_rng(3)
    f, g = Bump(interval(0, F(1, 3)), "time"), Bump(interval(F(1, 3), F(2, 3)), "time")
    h1, h2 = random_sinc_sum(rng), random_sinc_sum(rng)
    assert abs(gabor_cross_correlation(h1, h2, [f], [g], 1, 1, Z=64)) <= 1e-6
    assert abs(gabor_cross_correlation(h1, h1, [f], [f], 1, 1, Z=32)) > 1e-3


def test_finite_group_characteristic_windows():
    rng = np.random.default_rng(4)
    R, K = 48, 8
    n = np.arange(R * K)
    f = ((n < R) & (n % R < R // 3)).astype(float)
    g = ((n < R) & (n % R >= R // 3) & (n % R < 2 * R // 3)).astype(float)
    u1 = rng.normal(size=R * K) + 1j * rng.normal(size=R * K)
    u2 = rng.normal(size=R * K) + 1j * rng.normal(size=R * K)
    assert abs(finite_group_gabor_sum(u1, u2, f, g, R)) <= 1e-9
    assert abs(finite_group_gabor_sum(u1, u1, f, f, R)) > 1.0
