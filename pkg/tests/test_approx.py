import math

import pytest

from gittins.approx import ApproxParams, approx_gittins, beta


def test_beta_clamps_to_one():
    assert beta(1.0, 1) == 1.0
    assert approx_gittins(0.4, 1.0, 1) == 0.4


def test_beta_large_m():
    # m = 1e4, sigma^2 = 1: both min arguments equal, value m / (4 log^{3/2} m)
    b = beta(1.0, 10**4)
    ref = 0.25 * 10**4 / math.log(10**4) ** 1.5
    assert b == pytest.approx(ref, rel=1e-12)
    assert b == pytest.approx(89.43, abs=0.01)


def test_beta_large_variance_first_term_binds():
    m = 100
    b = beta(1e9, m)
    assert b == pytest.approx(0.25 * m / math.log(m) ** 1.5, rel=1e-9)


def test_approx_examples():
    assert approx_gittins(0.0, 1.0, 10**4) == pytest.approx(2.998, abs=1e-3)
    # additive in the mean
    a = approx_gittins(0.3, 0.7, 55)
    b = approx_gittins(0.0, 0.7, 55)
    assert a - b == pytest.approx(0.3, abs=1e-12)


def test_approx_at_least_mean():
    for m in (1, 2, 5, 100, 10**4):
        for s2 in (1e-3, 0.1, 1.0, 10.0):
            assert approx_gittins(-1.0, s2, m) >= -1.0
    assert approx_gittins(0.5, 0.0, 100) == 0.5


def test_monotone_in_m_from_3():
    for s2 in (0.1, 1.0, 5.0):
        vals = [approx_gittins(0.0, s2, m) for m in range(3, 200)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_validation():
    with pytest.raises(ValueError):
        beta(0.0, 5)
    with pytest.raises(ValueError):
        beta(1.0, 0)
    with pytest.raises(ValueError):
        approx_gittins(0.0, -1.0, 5)
    with pytest.raises(ValueError):
        ApproxParams(0.0)
