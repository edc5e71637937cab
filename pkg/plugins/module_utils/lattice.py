# -*- coding: utf-8 -*-
"""Cycle-graph lattice for the discrete Gierer-Meinhardt system.

    u_t     = D_u L u - u + u^2 / v
    tau v_t = D_v L v - v + u^2

L is the periodic second-difference stencil on n nodes. Node indices are
0-based and every index computation is taken mod n.
"""

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import csv
import json
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DomainError, InvalidInputError, NumericalError

MIN_NODES = 3


@dataclass(frozen=True)
class LatticeParams:
    n: int
    du: float = 0.0
    dv: float = 1.0
    tau: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < MIN_NODES:
            raise InvalidInputError("Failed to build lattice: n must be an integer >= {}, got {}".format(MIN_NODES, self.n))
        if not self.dv > 0:
            raise InvalidInputError("Failed to build lattice: D_v must be positive, got {}".format(self.dv))
        if not self.du >= 0:
            raise InvalidInputError("Failed to build lattice: D_u must be nonnegative, got {}".format(self.du))
        if not self.tau >= 0:
            raise InvalidInputError("Failed to build lattice: tau must be nonnegative, got {}".format(self.tau))

    @classmethod
    def from_d(cls, n, d, du=0.0, tau=0.0):
        '''D_v = d^2 n^2'''
        if not d > 0:
            raise InvalidInputError("Failed to build lattice: d must be positive, got {}".format(d))
        return cls(n=int(n), du=float(du), dv=float(d) ** 2 * n ** 2, tau=float(tau))

    @property
    def d(self):
        return np.sqrt(self.dv) / self.n

    def replace(self, **changes):
        fields = dict(n=self.n, du=self.du, dv=self.dv, tau=self.tau)
        fields.update(changes)
        return LatticeParams(**fields)


class LatticeState(object):
    '''Activator and inhibitor values on the n nodes of the cycle'''

    def __init__(self, u, v):
        u = np.array(u, dtype=float)
        v = np.array(v, dtype=float)
        if u.ndim != 1 or v.ndim != 1 or u.shape != v.shape:
            raise InvalidInputError("Failed to build lattice state: u and v must be sequences of equal length")
        if u.size < MIN_NODES:
            raise InvalidInputError("Failed to build lattice state: need at least {} nodes, got {}".format(MIN_NODES, u.size))
        bad = np.flatnonzero(~(v > 0))
        if bad.size:
            node = int(bad[0])
            raise DomainError("Failed to build lattice state: v({}) = {!r} is not positive".format(node, v[node]), node=node)
        self.u = u
        self.v = v

    @property
    def n(self):
        return self.u.size

    @classmethod
    def from_vector(cls, x):
        x = np.asarray(x, dtype=float)
        half = x.size // 2
        return cls(x[:half], x[half:])

    def as_vector(self):
        return np.concatenate([self.u, self.v])

    def rotate(self, shift):
        return LatticeState(np.roll(self.u, shift), np.roll(self.v, shift))

    def copy(self):
        return LatticeState(self.u.copy(), self.v.copy())

    def to_dict(self):
        return dict(n=self.n, u=self.u.tolist(), v=self.v.tolist())

    @classmethod
    def from_dict(cls, data):
        state = cls(data['u'], data['v'])
        if 'n' in data and int(data['n']) != state.n:
            raise InvalidInputError("Failed to load lattice state: n = {} does not match {} values".format(data['n'], state.n))
        return state

    def csv_rows(self):
        return [[k, repr(float(self.u[k])), repr(float(self.v[k]))] for k in range(self.n)]

    def write_csv(self, path):
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(['node', 'u', 'v'])
            writer.writerows(self.csv_rows())

    @classmethod
    def read_csv(cls, path):
        u, v = {}, {}
        try:
            with open(path, 'r', newline='') as f:
                for row in csv.DictReader(f):
                    node = int(row['node'])
                    u[node] = float(row['u'])
                    v[node] = float(row['v'])
        except (OSError, KeyError, ValueError) as e:
            raise InvalidInputError("Failed to read lattice state from {}: {}".format(path, e))
        if sorted(u) != list(range(len(u))):
            raise InvalidInputError("Failed to read lattice state from {}: nodes must be 0..n-1".format(path))
        return cls([u[k] for k in range(len(u))], [v[k] for k in range(len(v))])

    def write_json(self, path):
        with open(path, 'w') as f:
            json.dump(self.to_dict(), f, sort_keys=True)


def laplacian_apply(w):
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size < MIN_NODES:
        raise InvalidInputError("Failed to apply Laplacian: need a sequence of at least {} values".format(MIN_NODES))
    return np.roll(w, -1) + np.roll(w, 1) - 2.0 * w


def laplacian_matrix(n):
    if n < MIN_NODES:
        raise InvalidInputError("Failed to build Laplacian: n must be >= {}, got {}".format(MIN_NODES, n))
    return scipy.linalg.circulant(np.r_[-2.0, 1.0, np.zeros(n - 3), 1.0])


def laplacian_symbol(n):
    '''Eigenvalues of L on the discrete Fourier modes, ordered as numpy.fft.rfft'''
    k = np.arange(n // 2 + 1)
    return 2.0 * np.cos(2.0 * np.pi * k / n) - 2.0


def periodic_kernel(n, a, c):
    '''First column of (a I - c L)^{-1} for a > 0, c > 0.

    g_k = (r^k + r^(n-k)) / (c (1/r - r) (1 - r^n)) with r + 1/r = 2 + a/c, r < 1.
    '''
    q = a / c
    r = 2.0 / (q + 2.0 + np.sqrt(q * (q + 4.0)))
    k = np.arange(n)
    with np.errstate(under='ignore'):
        return (r ** k + r ** (n - k)) / (c * (1.0 / r - r) * -np.expm1(n * np.log(r)))


class CirculantSolver(object):
    '''Solves (alpha I + beta L) x = rhs on the cycle.

    M-matrix operators are inverted through their positive kernel as a dense
    circulant product, which keeps every entry of x to relative accuracy when
    rhs >= 0. Anything else goes through FFTs.
    '''

    def __init__(self, n, alpha, beta):
        self.n = n
        self.symbol = alpha + beta * laplacian_symbol(n)
        if np.any(np.abs(self.symbol) < 1e-14 * max(1.0, abs(alpha), abs(beta))):
            raise NumericalError("Failed to factor circulant operator: alpha={}, beta={} is singular".format(alpha, beta))
        sign = 1.0 if alpha > 0 else -1.0
        a, c = sign * alpha, -sign * beta
        self.inverse = None
        if a > 0 and c > 0:
            self.inverse = sign * scipy.linalg.circulant(periodic_kernel(n, a, c))
        elif a > 0 and c == 0:
            self.inverse = np.eye(n) / alpha

    def solve(self, rhs):
        if self.inverse is not None:
            return self.inverse @ np.asarray(rhs, dtype=float)
        return np.fft.irfft(np.fft.rfft(rhs) / self.symbol, n=self.n)


def _check_domain(state):
    bad = np.flatnonzero(~(state.v > 0))
    if bad.size:
        node = int(bad[0])
        raise DomainError("Failed to evaluate residual: v({}) = {!r} is not positive".format(node, state.v[node]), node=node)


def _check_size(params, state):
    if state.n != params.n:
        raise InvalidInputError("Failed to evaluate residual: state has {} nodes, params expect {}".format(state.n, params.n))


def steady_residual(params, state):
    _check_size(params, state)
    _check_domain(state)
    u, v = state.u, state.v
    fu = params.du * laplacian_apply(u) - u + u * (u / v)
    fv = params.dv * laplacian_apply(v) - v + u * u
    return np.concatenate([fu, fv])


def residual_scale(params, state):
    '''Magnitude of the diffusive flux terms; rounding in the residual is relative to this'''
    top = max(float(np.max(np.abs(state.u))), float(np.max(np.abs(state.v))))
    return 1.0 + max(params.du, params.dv) * top


def full_jacobian(params, state):
    _check_size(params, state)
    _check_domain(state)
    n = params.n
    u, v = state.u, state.v
    lap = laplacian_matrix(n)
    eye = np.eye(n)
    ratio = u / v
    jac = np.empty((2 * n, 2 * n))
    jac[:n, :n] = params.du * lap - eye + np.diag(2.0 * ratio)
    jac[:n, n:] = np.diag(-ratio * ratio)
    jac[n:, :n] = np.diag(2.0 * u)
    jac[n:, n:] = params.dv * lap - eye
    return jac


def mass_matrix(params):
    '''Weights of the time derivatives; the v-block is tau, singular for tau = 0'''
    return np.diag(np.r_[np.ones(params.n), np.full(params.n, params.tau)])


def pencil_eigenvalues(params, state):
    '''Finite eigenvalues of J psi = lambda B psi, sorted by decreasing real part.

    For tau = 0 the v-block is eliminated and the eigenvalues are those of the
    Schur complement J_uu - J_uv J_vv^{-1} J_vu.
    '''
    jac = full_jacobian(params, state)
    n = params.n
    try:
        if params.tau > 0:
            values = scipy.linalg.eigvals(jac, mass_matrix(params))
            values = values[np.isfinite(values)]
        else:
            coupling = scipy.linalg.solve(jac[n:, n:], jac[n:, :n])
            values = scipy.linalg.eigvals(jac[:n, :n] - jac[:n, n:] @ coupling)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise NumericalError("Failed to solve lattice eigenproblem: {}".format(e))
    return values[np.lexsort((-values.imag, -values.real))]
