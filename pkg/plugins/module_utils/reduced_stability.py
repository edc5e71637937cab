# -*- coding: utf-8 -*-
"""Stability of spike configurations.

The reduced K x K problem uses I - M with M_kj = 2 V_j G(x_k, x_j). Evenly
spaced symmetric configurations diagonalize over Floquet modes, which gives
the closed-form thresholds. The full-lattice spectrum and the local
optimality probe sit on top of the lattice solver.
"""

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from ansible.utils.display import Display

from .errors import InvalidInputError, NumericalError
from .greens import green_periodic
from .lattice import LatticeParams, pencil_eigenvalues
from .reduced_spikes import (
    assemble_profile,
    even_positions,
    green_matrix,
    newton_refine,
    solve_heights,
    default_guesses,
)

display = Display()

MARGINAL_TOL = 1e-8
PROBE_WINDOW = 0.02
CLASSIFICATIONS = ('stable', 'unstable', 'marginal')


def classify(max_real, marginal_tol=MARGINAL_TOL):
    if max_real < -marginal_tol:
        return 'stable'
    if max_real > marginal_tol:
        return 'unstable'
    return 'marginal'


@dataclass(frozen=True)
class StabilityReport:
    eigenvalues: tuple
    max_real: float
    classification: str
    marginal_tol: float = MARGINAL_TOL

    @classmethod
    def from_eigenvalues(cls, eigenvalues, marginal_tol=MARGINAL_TOL):
        values = np.asarray(eigenvalues, dtype=complex).ravel()
        if values.size == 0:
            raise NumericalError("Failed to classify stability: no finite eigenvalues")
        values = values[np.lexsort((-values.imag, -values.real))]
        max_real = float(values.real[0])
        return cls(eigenvalues=tuple(complex(z) for z in values), max_real=max_real,
                   classification=classify(max_real, marginal_tol), marginal_tol=float(marginal_tol))

    def __post_init__(self):
        if self.classification != classify(self.max_real, self.marginal_tol):
            raise InvalidInputError("Failed to build stability report: classification {} contradicts max_real {}".format(
                self.classification, self.max_real))

    @property
    def positive_count(self):
        return sum(1 for z in self.eigenvalues if z.real > self.marginal_tol)

    def to_dict(self):
        return dict(eigenvalues_re=[z.real for z in self.eigenvalues],
                    eigenvalues_im=[z.imag for z in self.eigenvalues],
                    max_real=self.max_real, classification=self.classification)


@dataclass(frozen=True)
class PerturbationSpec:
    s: tuple
    sigma: float

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        if s.ndim != 1 or s.size < 2 or not np.all(np.isfinite(s)):
            raise InvalidInputError("Failed to build perturbation: need one finite direction per spike (K >= 2)")
        if np.ptp(s) == 0:
            raise InvalidInputError("Failed to build perturbation: a uniform shift is a rotation of the pattern")
        if not self.sigma > 0:
            raise InvalidInputError("Failed to build perturbation: sigma must be positive, got {}".format(self.sigma))
        if self.sigma * np.max(np.abs(s)) >= 0.5 / s.size:
            raise InvalidInputError("Failed to build perturbation: sigma*max|s| = {} would reorder the spikes".format(
                self.sigma * np.max(np.abs(s))))
        object.__setattr__(self, 's', tuple(float(x) for x in s))

    @property
    def K(self):
        return len(self.s)

    def positions(self):
        '''Perturbed even positions, wrapped into [0, 1) and sorted'''
        x = np.mod(even_positions(self.K) + self.sigma * np.asarray(self.s), 1.0)
        return np.sort(x)

    def on_grid(self, n):
        shifted = n * (even_positions(self.K) + self.sigma * np.asarray(self.s))
        return bool(np.all(np.abs(shifted - np.round(shifted)) < 1e-9 * n))


def interaction_matrix(config):
    heights = np.asarray(config.heights)
    return 2.0 * green_matrix(config.positions, config.d) * heights[None, :]


def reduced_spectrum(config, marginal_tol=MARGINAL_TOL):
    m = interaction_matrix(config)
    try:
        values = scipy.linalg.eigvals(np.eye(config.K) - m)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise NumericalError("Failed to solve reduced eigenproblem: {}".format(e))
    if not np.all(np.isfinite(values)):
        raise NumericalError("Failed to solve reduced eigenproblem: non-finite eigenvalues")
    return StabilityReport.from_eigenvalues(values, marginal_tol)


def floquet_eigenvalues(K, d):
    if int(K) != K or K < 1:
        raise InvalidInputError("Failed to compute Floquet eigenvalues: K must be a positive integer, got {}".format(K))
    if not d > 0:
        raise InvalidInputError("Failed to compute Floquet eigenvalues: d must be positive, got {}".format(d))
    K = int(K)
    x = 1.0 / (K * d)
    theta = 2.0 * np.pi * np.arange(K) / K
    # (cosh x - 1)/(cosh x - cos t) with both terms scaled by exp(-x)
    e = np.exp(-x)
    num = 0.5 * (1.0 + e * e) - e
    den = 0.5 * (1.0 + e * e) - e * np.cos(theta)
    return 1.0 - 2.0 * num / den


def symmetric_threshold(K):
    if int(K) != K or K < 2:
        raise InvalidInputError("Failed to compute symmetric threshold: K must be an integer >= 2, got {}".format(K))
    K = int(K)
    return 1.0 / (K * np.arccosh(2.0 - np.cos(2.0 * np.pi * (K // 2) / K)))


def _log_cosh(x):
    x = abs(x)
    return x + np.log1p(np.exp(-2.0 * x)) - np.log(2.0)


def two_spike_threshold(l):
    '''d at which the equal-height pair with separation l changes stability.

    Root of cosh(1/(2d)) = 3 cosh((l - 1/2)/d); the pair is stable for
    smaller d, where a > 3b.
    '''
    if not 0 < l <= 0.5:
        raise InvalidInputError("Failed to compute two-spike threshold: separation must lie in (0, 1/2], got {}".format(l))

    def gap(log_d):
        d = np.exp(log_d)
        return _log_cosh(0.5 / d) - np.log(3.0) - _log_cosh((0.5 - l) / d)

    lo, hi = np.log(1e-4), np.log(1e2)
    if not gap(lo) > 0 > gap(hi):
        raise NumericalError("Failed to bracket the two-spike threshold for l={}".format(l))
    return float(np.exp(scipy.optimize.brentq(gap, lo, hi, xtol=1e-14)))


def two_spike_trace_det(a, b, kind='equal'):
    '''Closed-form trace and determinant of I - M for the two-spike states'''
    if kind == 'equal':
        return 2.0 * (b - a) / (a + b), (a - 3.0 * b) / (a + b)
    if kind == 'asymmetric':
        return -2.0 * b / (a - b), (3.0 * b - a) / (a - b)
    raise InvalidInputError("Failed to evaluate two-spike spectrum: unknown kind {}".format(kind))


def lattice_spectrum(params, state, marginal_tol=MARGINAL_TOL):
    return StabilityReport.from_eigenvalues(pencil_eigenvalues(params, state), marginal_tol)


def symmetric_lattice_state(n, K, d, du=0.0, tau=0.0):
    '''Refined evenly spaced equal-height K-spike state on n nodes'''
    if n % K:
        raise InvalidInputError("Failed to place {} spikes evenly on {} nodes".format(K, n))
    a = np.asarray(green_periodic(even_positions(K), 0.0, d))
    height = 1.0 / np.sum(a)
    positions = even_positions(K)
    configs = solve_heights(positions, d, guesses=[np.full(K, height)])
    if not configs:
        raise NumericalError("Failed to solve symmetric heights for K={} at d={}".format(K, d))
    params = LatticeParams.from_d(n, d, du=du, tau=tau)
    return params, newton_refine(assemble_profile(configs[0], n), params).state


def lattice_symmetric_threshold(n, K, tol=1e-6, marginal_tol=MARGINAL_TOL):
    '''Finite-n threshold of the symmetric K-spike state, by bisection in d'''
    d_c = symmetric_threshold(K)

    def max_real(d):
        params, state = symmetric_lattice_state(n, K, d)
        return lattice_spectrum(params, state, marginal_tol).max_real

    lo, hi = 0.5 * d_c, 1.5 * d_c
    f_lo, f_hi = max_real(lo), max_real(hi)
    if not f_lo < 0 < f_hi:
        raise NumericalError("Failed to bracket lattice threshold for n={}, K={}: max real {} at d={}, {} at d={}".format(
            n, K, f_lo, lo, f_hi, hi))
    while hi - lo > tol * d_c:
        mid = 0.5 * (lo + hi)
        if max_real(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def local_optimality_probe(K, d, spec, marginal_tol=MARGINAL_TOL):
    '''Max real parts of the symmetric state and of the state re-solved at perturbed positions'''
    d_c = symmetric_threshold(K)
    if abs(d - d_c) > PROBE_WINDOW * d_c:
        raise InvalidInputError("Failed to probe local optimality: d={} is not within {:.0%} of d_c={}".format(d, PROBE_WINDOW, d_c))
    if spec.K != K:
        raise InvalidInputError("Failed to probe local optimality: perturbation has {} directions for {} spikes".format(spec.K, K))
    symmetric = solve_heights(even_positions(K), d, guesses=[1.0 / green_matrix(even_positions(K), d).sum(axis=1)])
    if not symmetric:
        raise NumericalError("Failed to solve symmetric heights for K={} at d={}".format(K, d))
    base = np.asarray(symmetric[0].heights)
    sym_max = reduced_spectrum(symmetric[0], marginal_tol).max_real

    positions = spec.positions()
    seeds = [base] + default_guesses(positions, d)
    found = solve_heights(positions, d, guesses=seeds)
    if not found:
        raise NumericalError("Failed to re-solve heights at perturbed positions {}".format(positions.tolist()),
                             sigma=spec.sigma)
    nearest = min(found, key=lambda c: np.max(np.abs(np.asarray(c.heights) - base)))
    pert_max = reduced_spectrum(nearest, marginal_tol).max_real
    display.vv(u"Probe K={} d={}: symmetric {:.3e}, perturbed {:.3e}".format(K, d, sym_max, pert_max))
    return sym_max, pert_max


def random_directions(K, rng):
    '''Non-uniform direction vector with max |s| = 1'''
    while True:
        s = rng.standard_normal(K)
        if np.ptp(s) > 1e-6:
            return s / np.max(np.abs(s))


def probe_trials(K, d, sigma, trials, seed=0, threads=1, marginal_tol=MARGINAL_TOL):
    children = np.random.SeedSequence(seed).spawn(trials)

    def one(child):
        spec = PerturbationSpec(s=tuple(random_directions(K, np.random.default_rng(child))), sigma=sigma)
        return spec, local_optimality_probe(K, d, spec, marginal_tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, children))
    return [one(child) for child in children]
