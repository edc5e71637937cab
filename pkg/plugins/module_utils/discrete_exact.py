# -*- coding: utf-8 -*-
"""Exact symmetric K-spike solutions of the discrete system with D_u = 0.

Spikes sit every m = n/K nodes with u = v = C_0. Between spikes u = 0 and
v solves D_v (C_{j-1} - 2 C_j + C_{j+1}) = C_j, so C_j is a combination of
alpha1^j and alpha2^j with alpha1 alpha2 = 1. Everything is evaluated in
powers of alpha1 < 1 only, which keeps large m and small D_v finite.
"""

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from ansible.utils.display import Display

from .errors import InvalidInputError, NonexistenceError, NumericalError
from .lattice import LatticeState
from .reduced_stability import MARGINAL_TOL, StabilityReport

display = Display()

DV_BRACKET = (1e-6, 1e6)
DV_RTOL = 1e-10


def roots_alpha(dv):
    if not dv > 0:
        raise InvalidInputError("Failed to compute recurrence roots: D_v must be positive, got {}".format(dv))
    alpha2 = 1.0 + 0.5 / dv + np.sqrt(1.0 / dv + 0.25 / (dv * dv))
    return 1.0 / alpha2, alpha2


def _coefficients(alpha1, m):
    '''Spectral coefficients a, b in powers of alpha1'''
    denom = -np.expm1(2 * m * np.log(alpha1))
    a = (1.0 / alpha1 - alpha1) * alpha1 ** m / denom
    b = alpha1 * -np.expm1((2 * m - 2) * np.log(alpha1)) / denom
    return a, b


def _spike_value(dv, a, b):
    return 1.0 + 2.0 * dv - 2.0 * dv * (a + b)


def _mode_matrix_eigenvalues(dv, a, b, K):
    theta = 2.0 * np.pi * np.arange(K) / K
    return dv * (2.0 * b - 2.0 + 2.0 * a * np.cos(theta))


@dataclass(frozen=True)
class ExactSymmetricSolution:
    n: int
    K: int
    m: int
    dv: float
    alpha1: float
    alpha2: float
    C: tuple
    a_coef: float
    b_coef: float

    def __post_init__(self):
        if self.n != self.K * self.m:
            raise InvalidInputError("Failed to build exact solution: n={} is not K*m={}*{}".format(self.n, self.K, self.m))
        if not 0 < self.alpha1 < 1 < self.alpha2:
            raise InvalidInputError("Failed to build exact solution: roots {} and {} do not straddle 1".format(self.alpha1, self.alpha2))
        if abs(self.alpha1 * self.alpha2 - 1.0) > 1e-12:
            raise InvalidInputError("Failed to build exact solution: alpha1*alpha2 = {}".format(self.alpha1 * self.alpha2))
        if not self.C[0] > 0:
            raise NonexistenceError("Failed to build exact solution: C_0 = {} is not positive".format(self.C[0]))

    @property
    def C0(self):
        return self.C[0]

    def state(self):
        v = np.tile(np.asarray(self.C), self.K)
        u = np.zeros(self.n)
        u[::self.m] = self.C0
        return LatticeState(u, v)

    def to_dict(self):
        return dict(n=self.n, K=self.K, m=self.m, Dv=self.dv, alpha1=self.alpha1, alpha2=self.alpha2,
                    C=list(self.C), a_coef=self.a_coef, b_coef=self.b_coef)


def _check_pattern(n, K):
    if int(n) != n or int(K) != K or K < 1 or n < 3:
        raise InvalidInputError("Failed to build exact solution: need integers n >= 3 and K >= 1, got n={}, K={}".format(n, K))
    if n % K:
        raise InvalidInputError("Failed to build exact solution: K={} does not divide n={}".format(K, n))
    return int(n), int(K), int(n) // int(K)


def exact_symmetric_solution(n, K, dv):
    n, K, m = _check_pattern(n, K)
    alpha1, alpha2 = roots_alpha(dv)
    a, b = _coefficients(alpha1, m)
    c0 = _spike_value(dv, a, b)
    if not c0 > 0:
        raise NonexistenceError("Failed to build exact solution: C_0 = {} <= 0 for n={}, K={}, D_v={}".format(c0, n, K, dv))
    j = np.arange(m)
    # C_j / C_0 = (alpha1^j + alpha1^(m-j)) / (1 + alpha1^m)
    profile = c0 * (alpha1 ** j + alpha1 ** (m - j)) / (1.0 + alpha1 ** m)
    profile[0] = c0
    sol = ExactSymmetricSolution(n=n, K=K, m=m, dv=float(dv), alpha1=alpha1, alpha2=alpha2,
                                 C=tuple(float(c) for c in profile), a_coef=a, b_coef=b)
    return sol, sol.state()


def exact_mode_eigenvalues(sol):
    lam_m = _mode_matrix_eigenvalues(sol.dv, sol.a_coef, sol.b_coef, sol.K)
    return 1.0 - 2.0 * sol.C0 / (1.0 - lam_m)


def exact_spectrum(sol, marginal_tol=MARGINAL_TOL):
    return StabilityReport.from_eigenvalues(exact_mode_eigenvalues(sol), marginal_tol)


def _critical_gap(n, K, dv):
    m = n // K
    alpha1, _ = roots_alpha(dv)
    a, b = _coefficients(alpha1, m)
    worst = np.cos(2.0 * np.pi * (K // 2) / K)
    return 2.0 * _spike_value(dv, a, b) - (1.0 - dv * (2.0 * b - 2.0 + 2.0 * a * worst))


def critical_Dv(n, K):
    '''D_v at which the most unstable Floquet mode crosses zero.

    For even K that mode is j = K/2 and the condition is
    2 C_0 = 1 + 2 D_v + 2 D_v (a - b).
    '''
    n, K, _ = _check_pattern(n, K)
    if K < 2:
        raise InvalidInputError("Failed to compute critical D_v: K must be >= 2 (a single spike has no threshold)")

    def gap(log_dv):
        return _critical_gap(n, K, np.exp(log_dv))

    lo, hi = np.log(DV_BRACKET[0]), np.log(DV_BRACKET[1])
    g_lo, g_hi = gap(lo), gap(hi)
    if not (g_lo > 0 > g_hi):
        raise NumericalError("Failed to bracket critical D_v for n={}, K={}: gap {} at {} and {} at {}".format(
            n, K, g_lo, DV_BRACKET[0], g_hi, DV_BRACKET[1]))
    root = scipy.optimize.bisect(gap, lo, hi, xtol=DV_RTOL, maxiter=200)
    dvc = float(np.exp(root))
    display.vv(u"Critical D_v for n={}, K={}: {:.10g}".format(n, K, dvc))
    return dvc


def sweep_critical_dv(n, Ks, threads=1):
    '''Rows (n, K, m, Dvc, sqrt(Dvc)/m) for every K dividing n'''
    Ks = [int(K) for K in Ks]

    def row(K):
        dvc = critical_Dv(n, K)
        m = n // K
        return (int(n), K, m, dvc, float(np.sqrt(dvc) / m))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(row, Ks))
    return [row(K) for K in Ks]
