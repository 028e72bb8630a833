"""Gaussian moment machinery: the production recurrence against the
incomplete-gamma oracle and adaptive quadrature, across decay/interval
regimes including the unstable-upward one."""

import numpy as np
import pytest

from iterlab.moments import (cross_checked_moments, gauss_moments,
                             gauss_moments_gamma, gauss_moments_quad)

REGIMES = [
    (2.0, -1.0, 1.0, 120),
    (2.0, 0.5, 3.0, 120),
    (0.25, -2.0, 2.0, 120),
    (20.0, -1.0, 1.0, 120),
    (2.0, -4.0, -1.0, 100),
    (2.0, 2.0, 5.0, 100),
    (6.0, -0.3, 0.9, 110),
]


@pytest.mark.parametrize("c,a,b,kmax", REGIMES)
def test_recurrence_matches_incomplete_gamma(c, a, b, kmax):
    rec = gauss_moments(c, a, b, kmax)
    orc = gauss_moments_gamma(c, a, b, kmax)
    scale = np.maximum(np.abs(orc), np.max(np.abs(orc)) * 1e-12)
    assert np.max(np.abs(rec - orc) / scale) < 1e-10


@pytest.mark.parametrize("c,a,b", [(2.0, -1.0, 1.0), (0.5, 0.2, 2.5),
                                   (6.0, -2.0, 0.5)])
def test_recurrence_matches_quadrature(c, a, b):
    kmax = 40
    rec = gauss_moments(c, a, b, kmax)
    quad = gauss_moments_quad(c, a, b, kmax)
    scale = np.maximum(np.abs(quad), np.max(np.abs(quad)) * 1e-10)
    assert np.max(np.abs(rec - quad) / scale) < 1e-8


def test_cross_checked_wrapper_passes():
    out = cross_checked_moments(2.0, -1.0, 1.0, 80)
    assert out.shape == (81,)


def test_seed_values_exact():
    # M_0 over the whole line at c=1 approaches sqrt(pi)
    m = gauss_moments(1.0, -30.0, 30.0, 2)
    assert m[0] == pytest.approx(np.sqrt(np.pi), rel=1e-14)
    assert m[1] == pytest.approx(0.0, abs=1e-14)
    # odd moments vanish on symmetric intervals
    sym = gauss_moments(3.0, -1.5, 1.5, 31)
    assert np.max(np.abs(sym[1::2])) < 1e-15


def test_input_validation():
    with pytest.raises(ValueError):
        gauss_moments(-1.0, 0.0, 1.0, 10)
    with pytest.raises(ValueError):
        gauss_moments(1.0, 2.0, 1.0, 10)
