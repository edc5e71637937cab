# -*- coding: utf-8 -*-
"""Reduced spike model: heights V_k at positions x_k solve

    V_k = sum_j V_j^2 G(x_k, x_j)

with G the periodic Green's function; the lattice inhibitor is v = n V.
Also holds the closed-form two- and three-spike branches, lattice assembly
and the damped Newton polish on the full lattice.
"""

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import itertools
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize

from ansible.utils.display import Display

from .errors import ConvergenceError, DomainError, InvalidInputError, NumericalError
from .greens import green_periodic, self_and_cross
from .lattice import LatticeState, full_jacobian, residual_scale, steady_residual

display = Display()

HEIGHT_TOL = 1e-10
LATTICE_TOL = 1e-11
DEDUP_TOL = 1e-8
DEGENERATE_HEIGHT = 1e-12
MULTISTART_MAX_K = 6
MULTISTART_AMPLITUDES = (0.3, 0.75)


def _check_positions(positions):
    x = np.asarray(positions, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise InvalidInputError("Failed to validate spike positions: need at least one position")
    if not np.all(np.isfinite(x)) or np.any(x < 0) or np.any(x >= 1):
        raise InvalidInputError("Failed to validate spike positions: positions must lie in [0, 1), got {}".format(x.tolist()))
    if np.any(np.diff(x) <= 0):
        raise InvalidInputError("Failed to validate spike positions: positions must be strictly increasing, got {}".format(x.tolist()))
    return x


def green_matrix(positions, d):
    x = np.asarray(positions, dtype=float)
    return np.asarray(green_periodic(x[:, None], x[None, :], d), dtype=float).reshape(x.size, x.size)


def height_residual(positions, heights, d):
    g = green_matrix(positions, d)
    v = np.asarray(heights, dtype=float)
    return v - g @ (v * v)


@dataclass(frozen=True)
class SpikeConfiguration:
    positions: tuple
    heights: tuple
    d: float

    def __post_init__(self):
        x = _check_positions(self.positions)
        h = np.asarray(self.heights, dtype=float)
        if h.shape != x.shape:
            raise InvalidInputError("Failed to build spike configuration: {} positions but {} heights".format(x.size, h.size))
        if not self.d > 0:
            raise InvalidInputError("Failed to build spike configuration: d must be positive, got {}".format(self.d))
        if np.any(~(h > 0)):
            raise InvalidInputError("Failed to build spike configuration: heights must be positive, got {}".format(h.tolist()))
        object.__setattr__(self, 'positions', tuple(float(p) for p in x))
        object.__setattr__(self, 'heights', tuple(float(v) for v in h))
        if self.residual_norm >= HEIGHT_TOL:
            raise InvalidInputError("Failed to build spike configuration: height residual {:.3e} exceeds {:.0e}".format(self.residual_norm, HEIGHT_TOL))

    @property
    def K(self):
        return len(self.positions)

    @property
    def residual_norm(self):
        return float(np.max(np.abs(height_residual(self.positions, self.heights, self.d))))

    def to_dict(self):
        return dict(K=self.K, d=self.d, positions=list(self.positions), heights=list(self.heights),
                    residual_norm=self.residual_norm)


@dataclass(frozen=True)
class TwoSpikeCoefficients:
    a: float
    b: float
    l: float

    @classmethod
    def at(cls, l, d):
        if not 0 < l <= 0.5:
            raise InvalidInputError("Failed to compute two-spike coefficients: separation must lie in (0, 1/2], got {}".format(l))
        a, b = self_and_cross(l, d)
        return cls(a=a, b=b, l=float(l))

    def __post_init__(self):
        if not self.a > self.b > 0:
            raise InvalidInputError("Failed to compute two-spike coefficients: need a > b > 0, got a={}, b={}".format(self.a, self.b))


def even_positions(K):
    if int(K) != K or K < 1:
        raise InvalidInputError("Failed to place spikes: K must be a positive integer, got {}".format(K))
    return np.arange(int(K)) / float(K)


def default_guesses(positions, d):
    '''Symmetric guess V_k = 1 / sum_j G_kj plus sign-pattern perturbations for small K'''
    g = green_matrix(positions, d)
    base = 1.0 / g.sum(axis=1)
    guesses = [base]
    if base.size <= MULTISTART_MAX_K:
        for amp in MULTISTART_AMPLITUDES:
            for signs in itertools.product((1.0, -1.0), repeat=base.size):
                guesses.append(base * (1.0 + amp * np.asarray(signs)))
    return guesses


def _newton_heights(g, guess, max_iter=50, max_halvings=30):
    eye = np.eye(g.shape[0])
    h = np.array(guess, dtype=float)

    def residual(x):
        return x - g @ (x * x)

    f = residual(h)
    norm = np.max(np.abs(f))
    for it in range(max_iter + 1):
        if not np.isfinite(norm):
            return None, "non-finite iterate at step {}".format(it)
        if norm < HEIGHT_TOL:
            try:
                polished = h + scipy.linalg.solve(eye - 2.0 * g * h[None, :], -f)
                if np.max(np.abs(residual(polished))) < norm:
                    h = polished
            except (scipy.linalg.LinAlgError, ValueError):
                pass
            return h, None
        if it == max_iter:
            break
        try:
            step = scipy.linalg.solve(eye - 2.0 * g * h[None, :], -f)
        except (scipy.linalg.LinAlgError, ValueError) as e:
            return None, "singular height Jacobian: {}".format(e)
        t = 1.0
        for _ in range(max_halvings + 1):
            trial = h + t * step
            ft = residual(trial)
            nt = np.max(np.abs(ft))
            if np.isfinite(nt) and nt < norm:
                break
            t *= 0.5
        else:
            return None, "line search failed at step {} (residual {:.3e})".format(it, norm)
        h, f, norm = trial, ft, nt
    return None, "no convergence after {} steps (residual {:.3e})".format(max_iter, norm)


def solve_heights(positions, d, guesses=None, threads=1):
    x = _check_positions(positions)
    if not d > 0:
        raise InvalidInputError("Failed to solve spike heights: d must be positive, got {}".format(d))
    if guesses is None:
        guesses = default_guesses(x, d)
    guesses = [np.asarray(gs, dtype=float) for gs in guesses]
    if not guesses:
        raise InvalidInputError("Failed to solve spike heights: at least one guess is required")
    for gs in guesses:
        if gs.shape != x.shape:
            raise InvalidInputError("Failed to solve spike heights: guess of length {} for {} spikes".format(gs.size, x.size))
    g = green_matrix(x, d)

    if threads > 1 and len(guesses) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda gs: _newton_heights(g, gs), guesses))
    else:
        outcomes = [_newton_heights(g, gs) for gs in guesses]

    found = []
    for index, (heights, failure) in enumerate(outcomes):
        if failure is not None:
            display.vvv(u"Height guess {} failed: {}".format(index, failure))
            continue
        if np.any(heights <= DEGENERATE_HEIGHT):
            display.vvv(u"Height guess {} converged to a degenerate solution {}".format(index, heights.tolist()))
            continue
        if any(np.max(np.abs(heights - other)) < DEDUP_TOL for other in found):
            continue
        found.append(heights)
    found.sort(key=tuple)
    display.vv(u"Found {} height solution(s) for K={} at d={}".format(len(found), x.size, d))
    return [SpikeConfiguration(positions=tuple(x), heights=tuple(h), d=float(d)) for h in found]


def two_spike_closed_form(l, d):
    coef = TwoSpikeCoefficients.at(l, d)
    a, b = coef.a, coef.b
    positions = (0.0, float(l))
    out = [SpikeConfiguration(positions, (1.0 / (a + b),) * 2, d)]
    disc = a * a - 2.0 * a * b - 3.0 * b * b
    if disc >= 0:
        root = np.sqrt(disc)
        denom = 2.0 * (a + b) * (a - b)
        hi = (a + b + root) / denom
        lo = (a + b - root) / denom
        out.append(SpikeConfiguration(positions, (hi, lo), d))
        out.append(SpikeConfiguration(positions, (lo, hi), d))
    return out


def three_spike_discriminant(d):
    a, b = self_and_cross(1.0 / 3.0, d)
    return a * a - 2.0 * a * b - 7.0 * b * b


def three_spike_even_closed_form(d):
    if not d > 0:
        raise InvalidInputError("Failed to build three-spike solutions: d must be positive, got {}".format(d))
    a, b = self_and_cross(1.0 / 3.0, d)
    positions = tuple(even_positions(3))
    out = [SpikeConfiguration(positions, (1.0 / (a + 2.0 * b),) * 3, d)]
    disc = a * a - 2.0 * a * b - 7.0 * b * b
    if disc >= 0:
        root = np.sqrt(disc)
        denom = 2.0 * (a + 2.0 * b) * (a - b)
        for sign in (1.0, -1.0):
            single = (a + 3.0 * b + sign * root) / denom
            pair = (a + b - sign * root) / denom
            for r in range(3):
                heights = [pair] * 3
                heights[r] = single
                out.append(SpikeConfiguration(positions, tuple(heights), d))
    return out


def three_spike_asymmetric_limit(tol=1e-4):
    '''Largest d at which the two-height even three-spike solutions exist'''
    lo, hi = 0.05, 1.0
    if not three_spike_discriminant(lo) > 0 > three_spike_discriminant(hi):
        raise NumericalError("Failed to bracket the three-spike existence limit in [{}, {}]".format(lo, hi))
    return scipy.optimize.bisect(three_spike_discriminant, lo, hi, xtol=tol)


def spike_nodes(config, n):
    nodes = []
    for k, x in enumerate(config.positions):
        node = n * x
        nearest = int(round(node))
        if abs(node - nearest) > 1e-9 * max(1.0, n):
            raise InvalidInputError("Failed to assemble profile: spike {} at x={} is not on the n={} grid".format(k, x, n))
        nodes.append(nearest % n)
    return nodes


def assemble_profile(config, n):
    '''Leading-order lattice state of a reduced configuration.

    Spike nodes carry u = v = n V_k; elsewhere u = 0 and
    v(j) = sum_k n V_k^2 G(j/n, x_k).
    '''
    nodes = spike_nodes(config, n)
    heights = np.asarray(config.heights)
    grid = np.arange(n) / float(n)
    g = np.asarray(green_periodic(grid[:, None], np.asarray(config.positions)[None, :], config.d)).reshape(n, config.K)
    v = n * g @ (heights * heights)
    u = np.zeros(n)
    u[nodes] = n * heights
    return LatticeState(u, v)


@dataclass
class RefineResult:
    state: LatticeState
    iterations: int
    residual_norm: float
    history: list = field(default_factory=list)


def _newton_step(jac, rhs):
    with warnings.catch_warnings():
        warnings.simplefilter('error', scipy.linalg.LinAlgWarning)
        try:
            return scipy.linalg.solve(jac, rhs)
        except (scipy.linalg.LinAlgError, scipy.linalg.LinAlgWarning, ValueError):
            pass
    # singular direction: least-squares step
    step = scipy.linalg.lstsq(jac, rhs)[0]
    if not np.all(np.isfinite(step)) or not np.any(step):
        raise NumericalError("Failed to refine on lattice: singular Jacobian")
    return step


def _try_state(x):
    try:
        return LatticeState.from_vector(x)
    except DomainError:
        return None


def newton_refine(initial, params, tol=LATTICE_TOL, max_iter=50, max_halvings=30):
    '''Damped Newton on steady_residual with step halving.

    Converged when max|F| <= tol * residual_scale, which reduces to the
    absolute tolerance once the diffusive flux is O(1).
    '''
    state = initial
    f = steady_residual(params, state)
    norm = float(np.max(np.abs(f)))
    history = [norm]
    for it in range(max_iter + 1):
        if not np.isfinite(norm):
            raise ConvergenceError("Failed to refine on lattice: non-finite residual at step {}".format(it),
                                   iterations=it, residual=norm)
        limit = tol * residual_scale(params, state)
        display.vvv(u"Newton step {}: residual {:.3e} (target {:.3e})".format(it, norm, limit))
        if norm <= limit:
            try:
                polished = _try_state(state.as_vector() + _newton_step(full_jacobian(params, state), -f))
            except NumericalError:
                polished = None
            if polished is not None:
                fp = steady_residual(params, polished)
                if np.max(np.abs(fp)) < norm:
                    state, norm = polished, float(np.max(np.abs(fp)))
            return RefineResult(state=state, iterations=it, residual_norm=norm, history=history)
        if it == max_iter:
            break
        x = state.as_vector()
        step = _newton_step(full_jacobian(params, state), -f)
        t = 1.0
        for _ in range(max_halvings + 1):
            trial = _try_state(x + t * step)
            if trial is not None:
                ft = steady_residual(params, trial)
                nt = float(np.max(np.abs(ft)))
                if np.isfinite(nt) and nt < norm:
                    break
            t *= 0.5
        else:
            raise ConvergenceError("Failed to refine on lattice: no descent after {} halvings at step {} (residual {:.3e})".format(
                max_halvings, it, norm), iterations=it, residual=norm)
        state, f, norm = trial, ft, nt
        history.append(norm)
    raise ConvergenceError("Failed to refine on lattice: residual {:.3e} after {} steps".format(norm, max_iter),
                           iterations=max_iter, residual=norm)


def refine_on_lattice(initial, params, tol=LATTICE_TOL, max_iter=50, max_halvings=30):
    return newton_refine(initial, params, tol=tol, max_iter=max_iter, max_halvings=max_halvings).state
