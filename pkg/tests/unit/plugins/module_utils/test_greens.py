# -*- coding: utf-8 -*-

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import numpy as np
import pytest
import scipy.linalg

from plugins.module_utils.errors import InvalidInputError
from plugins.module_utils.greens import (
    GreenParams,
    green_neumann,
    green_periodic,
    green_periodic_derivatives,
    self_and_cross,
    wrapped_distance,
)

POINTS = 10000


def test_params_need_positive_d():
    with pytest.raises(InvalidInputError):
        GreenParams(0.0)
    with pytest.raises(InvalidInputError):
        green_periodic(0.1, 0.0, -1.0)


def test_neumann_symmetry():
    assert green_neumann(0.3, 0.7, 0.2) == green_neumann(0.7, 0.3, 0.2)


def test_neumann_derivative_jump():
    d, x0, h = 0.2, 0.4, 1e-6
    right = (green_neumann(x0 + 2 * h, x0, d) - green_neumann(x0 + h, x0, d)) / h
    left = (green_neumann(x0 - h, x0, d) - green_neumann(x0 - 2 * h, x0, d)) / h
    assert right - left == pytest.approx(-1.0 / d ** 2, rel=1e-5)


def test_neumann_matches_boundary_value_solve():
    d, x0 = 0.2, 0.3
    h = 1.0 / POINTS
    x = np.arange(POINTS + 1) * h
    c = d * d / (h * h)
    diag = np.full(POINTS + 1, -2.0 * c - 1.0)
    upper = np.full(POINTS, c)
    lower = np.full(POINTS, c)
    upper[0] = 2.0 * c
    lower[-1] = 2.0 * c
    rhs = np.zeros(POINTS + 1)
    source = int(round(x0 / h))
    rhs[source] = -1.0 / h
    bands = np.zeros((3, POINTS + 1))
    bands[0, 1:] = upper
    bands[1] = diag
    bands[2, :-1] = lower
    g = scipy.linalg.solve_banded((1, 1), bands, rhs)
    exact = green_neumann(x, x0, d)
    assert np.max(np.abs(g - exact) / exact) < 1e-4


def test_periodic_antipode():
    d = 0.25
    assert green_periodic(0.5, 0.0, d) == pytest.approx(1.0 / (2 * d * np.sinh(1.0 / (2 * d))), rel=1e-14)


def test_periodic_wraps_around():
    assert wrapped_distance(0.9, 0.1) == pytest.approx(0.2, abs=1e-15)
    assert green_periodic(0.9, 0.1, 0.3) == pytest.approx(green_periodic(0.2, 0.0, 0.3), rel=1e-14)


def test_periodic_matches_circulant_solve():
    d = 0.15
    h = 1.0 / POINTS
    c = d * d / (h * h)
    column = np.zeros(POINTS)
    column[0] = -2.0 * c - 1.0
    column[1] = c
    column[-1] = c
    rhs = np.zeros(POINTS)
    rhs[0] = -1.0 / h
    g = scipy.linalg.solve_circulant(column, rhs)
    exact = green_periodic(np.arange(POINTS) * h, 0.0, d)
    assert np.max(np.abs(g - exact) / exact) < 1e-4


def test_periodic_positive_and_decreasing():
    l = np.linspace(0.0, 0.5, 201)
    g = green_periodic(l, 0.0, 0.1)
    assert np.all(g > 0)
    assert np.all(np.diff(g) < 0)


def test_self_exceeds_cross():
    for d in (0.05, 0.2, 1.0):
        for l in (0.1, 0.3, 0.5):
            a, b = self_and_cross(l, d)
            assert a > b


def test_small_d_decouples_spikes():
    a, b = self_and_cross(0.5, 0.05)
    assert b / a < 1e-4


def test_small_d_stays_finite():
    g = green_periodic(np.linspace(0.0, 0.5, 11), 0.0, 0.005)
    assert np.all(np.isfinite(g))


def test_second_derivative_is_ode():
    d = 0.3
    for l in (0.05, 0.2, 0.45):
        g, _, gxx = green_periodic_derivatives(l, d)
        assert gxx * d * d == pytest.approx(g, rel=1e-14)


def test_first_derivative():
    d, h = 0.3, 1e-5
    _, gx, _ = green_periodic_derivatives(0.5, d)
    assert gx == 0.0
    for l in (0.1, 0.25, 0.4):
        _, gx, _ = green_periodic_derivatives(l, d)
        fd = (green_periodic(l + h, 0.0, d) - green_periodic(l - h, 0.0, d)) / (2 * h)
        assert gx == pytest.approx(fd, abs=1e-7)


def test_derivatives_reject_zero_separation():
    with pytest.raises(InvalidInputError):
        green_periodic_derivatives(0.0, 0.2)
