# -*- coding: utf-8 -*-
"""Spikes and mesas for D_u = eps^2, D_v = kappa eps^2 with eps small.

A plateau of m nodes holds u = v = 1. A tail node at distance j from the
plateau holds v = (kappa eps^2)^j and u = eta_{j+1} v, where

    eta_1 = 1,  eta_k = (1 +/- sqrt(1 - 4 eta_{k-1} / kappa)) / 2.

Only the all-minus recursion gives stable tails, and it needs kappa >= 4.
"""

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

from dataclasses import dataclass

import numpy as np

from ansible.utils.display import Display

from .errors import ConvergenceError, InvalidInputError, NonexistenceError, NumericalError
from .lattice import LatticeParams, LatticeState
from .reduced_spikes import newton_refine

display = Display()

TAIL_FLOOR = 1e-300
KAPPA_BRACKET = (3.0, 8.0)
KAPPA_TOL = 1e-3
JUMP_RATIO = 0.5


def _signs(branch, steps):
    if branch is None:
        return [-1] * steps
    out = []
    for s in branch:
        if s in ('+', 1, 1.0, '+1'):
            out.append(1)
        elif s in ('-', -1, -1.0, '-1'):
            out.append(-1)
        else:
            raise InvalidInputError("Failed to read branch: sign {!r} is not one of +, -".format(s))
    if len(out) != steps:
        raise InvalidInputError("Failed to read branch: {} signs given for {} recursion steps".format(len(out), steps))
    return out


def eta_recursion(kappa, length, branch=None, clamp=False):
    '''eta_1..eta_length; branch holds one sign per step k = 2..length.

    With clamp=True a negative discriminant is replaced by 0 instead of
    raising, which gives a usable Newton seed below the fold.
    '''
    if not kappa > 0:
        raise InvalidInputError("Failed to run eta recursion: kappa must be positive, got {}".format(kappa))
    if int(length) != length or length < 1:
        raise InvalidInputError("Failed to run eta recursion: length must be a positive integer, got {}".format(length))
    signs = _signs(branch, int(length) - 1)
    eta = [1.0]
    for k, sign in enumerate(signs, start=2):
        disc = 1.0 - 4.0 * eta[-1] / kappa
        if disc < 0:
            if not clamp:
                raise NonexistenceError("Failed to run eta recursion: discriminant {:.6g} < 0 at step {} (kappa={})".format(
                    disc, k, kappa), step=k)
            disc = 0.0
        if sign > 0:
            eta.append(0.5 * (1.0 + np.sqrt(disc)))
        else:
            # (1 - sqrt(disc)) / 2 without cancellation for small eta
            eta.append(2.0 * eta[-1] / (kappa * (1.0 + np.sqrt(disc))))
    return np.asarray(eta)


def eta_fixed_points(kappa):
    '''Fixed points of eta -> (1 +/- sqrt(1 - 4 eta / kappa)) / 2; the minus recursion decays to the first'''
    if not kappa > 0:
        raise InvalidInputError("Failed to compute eta fixed points: kappa must be positive, got {}".format(kappa))
    return 0.0, 1.0 - 1.0 / kappa


def first_tail_values(kappa):
    '''(u1(2) minus, u1(2) plus, v1(2)) of the first tail node at order eps^2'''
    disc = kappa * kappa - 4.0 * kappa
    if disc < 0:
        raise NonexistenceError("Failed to compute first tail values: kappa={} < 4".format(kappa), step=2)
    root = np.sqrt(disc)
    return 0.5 * (kappa - root), 0.5 * (kappa + root), float(kappa)


@dataclass
class MesaProfile:
    n: int
    m: int
    kappa: float
    eps2: float
    eta: np.ndarray
    branch: tuple
    u0: np.ndarray
    v0: np.ndarray

    @property
    def tail_length(self):
        return -(-(self.n - self.m) // 2)

    def params(self):
        return mesa_params(self.n, self.kappa, self.eps2)

    def tail_distance(self):
        '''Distance of each node to the plateau (0 on the plateau)'''
        k = np.arange(self.n)
        right = k - (self.m - 1)
        left = self.n - k
        dist = np.minimum(right, left)
        dist[:self.m] = 0
        return dist

    def leading_state(self):
        return LatticeState(self.u0, self.v0)


def mesa_params(n, kappa, eps2):
    if not eps2 > 0:
        raise InvalidInputError("Failed to build mesa parameters: eps2 must be positive, got {}".format(eps2))
    return LatticeParams(n=int(n), du=float(eps2), dv=float(kappa) * float(eps2), tau=0.0)


def leading_order(n, m, kappa, eps2, branch=None, clamp=False):
    if int(n) != n or int(m) != m or not 1 <= m < n:
        raise InvalidInputError("Failed to build mesa: need integers 1 <= m < n, got n={}, m={}".format(n, m))
    if not eps2 > 0:
        raise InvalidInputError("Failed to build mesa: eps2 must be positive, got {}".format(eps2))
    n, m = int(n), int(m)
    tail = -(-(n - m) // 2)
    eta = eta_recursion(kappa, tail + 1, branch, clamp=clamp)
    ratio = kappa * eps2
    profile = MesaProfile(n=n, m=m, kappa=float(kappa), eps2=float(eps2), eta=eta,
                          branch=tuple(_signs(branch, tail)), u0=None, v0=None)
    dist = profile.tail_distance()
    with np.errstate(under='ignore'):
        v0 = np.where(dist == 0, 1.0, np.power(ratio, dist.astype(float)))
    v0 = np.maximum(v0, TAIL_FLOOR)
    u0 = np.where(dist == 0, 1.0, eta[np.minimum(dist, tail)] * v0)
    profile.u0 = u0
    profile.v0 = v0
    return profile


def mesa_profile(n, m, kappa, eps2, branch=None):
    '''Leading-order m-mesa and its Newton refinement on the lattice'''
    if not kappa > 4:
        raise NonexistenceError("Failed to build mesa: kappa must exceed 4, got {}".format(kappa), step=2)
    profile = leading_order(n, m, kappa, eps2, branch)
    refined = newton_refine(profile.leading_state(), profile.params())
    display.vv(u"Mesa n={} m={} kappa={} eps2={} refined in {} steps (residual {:.3e})".format(
        n, m, kappa, eps2, refined.iterations, refined.residual_norm))
    return profile, refined.state


def compose_mesas(n, widths, gaps, kappa, eps2):
    '''Several plateaus separated by minus-branch tails, refined as one state.

    widths[i] is the plateau width of block i and gaps[i] the number of
    tail nodes after it; sum(widths) + sum(gaps) must equal n.
    '''
    if len(widths) != len(gaps) or not widths:
        raise InvalidInputError("Failed to compose mesas: widths and gaps must be nonempty and of equal length")
    if sum(widths) + sum(gaps) != n:
        raise InvalidInputError("Failed to compose mesas: widths {} and gaps {} do not cover n={}".format(widths, gaps, n))
    if any(w < 1 for w in widths) or any(g < 2 for g in gaps):
        raise InvalidInputError("Failed to compose mesas: widths must be >= 1 and gaps >= 2")
    if not kappa > 4:
        raise NonexistenceError("Failed to compose mesas: kappa must exceed 4, got {}".format(kappa), step=2)
    ratio = kappa * eps2
    eta = eta_recursion(kappa, max(gaps) + 1)
    u = np.empty(n)
    v = np.empty(n)
    k = 0
    for width, gap in zip(widths, gaps):
        u[k:k + width] = 1.0
        v[k:k + width] = 1.0
        k += width
        for j in range(1, gap + 1):
            dist = min(j, gap + 1 - j)
            with np.errstate(under='ignore'):
                v[k] = max(ratio ** dist, TAIL_FLOOR)
            u[k] = eta[dist] * v[k]
            k += 1
    params = mesa_params(n, kappa, eps2)
    return newton_refine(LatticeState(u, v), params).state


def _leading_eigenvalue(u, v):
    '''Diagonal linearization 2u/v - 1 - 2u^3/v^2 of a decoupled node'''
    return 2.0 * u / v - 1.0 - 2.0 * u ** 3 / v ** 2


def mesa_leading_spectrum(profile):
    dist = profile.tail_distance()
    out = np.empty(profile.n)
    plateau = dist == 0
    out[plateau] = _leading_eigenvalue(profile.u0[plateau], profile.v0[plateau])
    tail = ~plateau
    out[tail] = 2.0 * profile.eta[np.minimum(dist[tail], len(profile.eta) - 1)] - 1.0
    return out


def eta_trace_rows(profile):
    signs = ('',) + tuple('+' if s > 0 else '-' for s in profile.branch)
    return [(k + 1, float(profile.eta[k]), signs[k]) for k in range(len(profile.eta))]


def mesa_existence(kappa, eps2, n, m, max_iter=50, max_halvings=30):
    '''True when Newton from the clamped leading-order seed converges to a mesa-shaped state'''
    try:
        seed = leading_order(n, m, kappa, eps2, clamp=True)
        refined = newton_refine(seed.leading_state(), seed.params(), max_iter=max_iter, max_halvings=max_halvings)
    except (ConvergenceError, NumericalError, NonexistenceError) as e:
        display.vvv(u"No mesa at kappa={}: {}".format(kappa, e))
        return False
    u = refined.state.u
    plateau = u[:m]
    tail = u[m:]
    shaped = bool(np.min(plateau) > JUMP_RATIO and np.max(tail) < JUMP_RATIO * np.min(plateau))
    display.vvv(u"Mesa at kappa={}: converged, shape {}".format(kappa, 'kept' if shaped else 'lost'))
    return shaped


def fold_kappa(eps2, n, m, bracket=KAPPA_BRACKET, tol=KAPPA_TOL):
    lo, hi = bracket
    exists_lo = mesa_existence(lo, eps2, n, m)
    exists_hi = mesa_existence(hi, eps2, n, m)
    if exists_lo or not exists_hi:
        raise NumericalError("Failed to bracket the fold in kappa: exists({})={}, exists({})={}".format(
            lo, exists_lo, hi, exists_hi), eps2=eps2, n=n, m=m)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mesa_existence(mid, eps2, n, m):
            hi = mid
        else:
            lo = mid
    display.vv(u"Fold kappa for eps2={}, n={}, m={}: {:.4f}".format(eps2, n, m, hi))
    return hi
