# -*- coding: utf-8 -*-
"""Green's functions of d^2 G'' - G = -delta(x - x0) on the unit interval and circle.

All hyperbolic ratios are written with exponentials of nonpositive arguments,
so small d (1/(2d) in the hundreds) neither overflows nor loses precision.
"""

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True)
class GreenParams:
    d: float

    def __post_init__(self):
        _check_d(self.d)


def _check_d(d):
    if not d > 0:
        raise InvalidInputError("Failed to evaluate Green's function: d must be positive, got {}".format(d))


def wrapped_distance(x, x0):
    '''Distance on the unit circle, in [0, 1/2]'''
    gap = np.mod(np.asarray(x, dtype=float) - np.asarray(x0, dtype=float), 1.0)
    return np.minimum(gap, 1.0 - gap)


def green_neumann(x, x0, d):
    _check_d(d)
    x = np.asarray(x, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    if np.any((x < 0) | (x > 1)) or np.any((x0 < 0) | (x0 > 1)):
        raise InvalidInputError("Failed to evaluate Neumann Green's function: positions must lie in [0, 1]")
    lo = np.minimum(x, x0) / d
    hi = (1.0 - np.maximum(x, x0)) / d
    c = 1.0 / d
    # cosh(lo) cosh(hi) / (d sinh(c)) with lo + hi <= c
    num = np.exp(lo + hi - c) + np.exp(lo - hi - c) + np.exp(hi - lo - c) + np.exp(-lo - hi - c)
    out = num / (2.0 * d * -np.expm1(-2.0 * c))
    return out if out.ndim else float(out)


def _periodic(l, d):
    a = (0.5 - l) / d
    c = 0.5 / d
    return (np.exp(a - c) + np.exp(-a - c)) / (2.0 * d * -np.expm1(-2.0 * c))


def green_periodic(x, x0, d):
    _check_d(d)
    out = _periodic(wrapped_distance(x, x0), d)
    return out if np.ndim(out) else float(out)


def green_periodic_derivatives(l, d):
    '''(G, G_x, G_xx) with respect to the separation l in (0, 1/2]'''
    _check_d(d)
    l = np.asarray(l, dtype=float)
    if np.any(l <= 0) or np.any(l > 0.5):
        raise InvalidInputError("Failed to differentiate periodic Green's function: separation must lie in (0, 1/2], got {}".format(l))
    a = (0.5 - l) / d
    c = 0.5 / d
    g = _periodic(l, d)
    gx = -(np.exp(a - c) - np.exp(-a - c)) / (2.0 * d * d * -np.expm1(-2.0 * c))
    gxx = g / (d * d)
    if not np.ndim(g):
        return float(g), float(gx), float(gxx)
    return g, gx, gxx


def self_and_cross(l, d):
    '''The two-spike coefficients a = G(0) and b = G(l)'''
    return green_periodic(0.0, 0.0, d), green_periodic(l, 0.0, d)
