# -*- coding: utf-8 -*-
"""Time stepping of the full lattice system.

Linear terms are circulant, so every implicit solve is a division in
Fourier space. With tau = 0 the inhibitor is slaved to the activator and
is re-solved from (D_v L - I) v = -u^2 after every step.
"""

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ansible.utils.display import Display

from .errors import BlowUpError, InvalidInputError, NumericalError
from .lattice import CirculantSolver, LatticeState, laplacian_apply, residual_scale, steady_residual

display = Display()

MODES = ('explicit', 'imex', 'dae')
STEADY_TOL = 1e-9
SHRINK = 0.1
GROW = 10.0
SETTLE_TIME = 5.0


@dataclass(frozen=True)
class SimConfig:
    dt: float = 1e-3
    t_end: float = 200.0
    mode: str = 'imex'
    sample_every: int = 100
    seed: int = 0
    perturb_amp: float = 1e-3

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidInputError("Failed to configure simulation: dt must be positive, got {}".format(self.dt))
        if not self.t_end >= self.dt:
            raise InvalidInputError("Failed to configure simulation: t_end={} is shorter than dt={}".format(self.t_end, self.dt))
        if self.mode not in MODES:
            raise InvalidInputError("Failed to configure simulation: mode must be one of {}, got {}".format(', '.join(MODES), self.mode))
        if int(self.sample_every) != self.sample_every or self.sample_every < 1:
            raise InvalidInputError("Failed to configure simulation: sample_every must be a positive integer")
        if not self.perturb_amp >= 0:
            raise InvalidInputError("Failed to configure simulation: perturb_amp must be nonnegative")

    @property
    def steps(self):
        return int(round(self.t_end / self.dt))


@dataclass
class Trajectory:
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    max_u: list = field(default_factory=list)
    spike_sets: list = field(default_factory=list)
    residual_norms: list = field(default_factory=list)

    def record(self, t, state, params):
        self.times.append(float(t))
        self.states.append(state)
        self.max_u.append(float(np.max(np.abs(state.u))))
        self.spike_sets.append(spike_set(state.u))
        self.residual_norms.append(float(np.max(np.abs(steady_residual(params, state)))))

    @property
    def final(self):
        return self.states[-1]


def spike_set(u):
    top = np.max(u)
    if not top > 0:
        return frozenset()
    return frozenset(int(k) for k in np.flatnonzero(u > 0.5 * top))


class Integrator(object):

    def __init__(self, params, cfg):
        if cfg.mode == 'dae' and params.tau != 0:
            raise InvalidInputError("Failed to configure simulation: dae mode requires tau = 0, got tau={}".format(params.tau))
        self.params = params
        self.cfg = cfg
        dt = cfg.dt
        n = params.n
        self.slaved = params.tau == 0
        if self.slaved:
            self.v_constraint = CirculantSolver(n, -1.0, params.dv)
        if cfg.mode == 'explicit':
            if dt * (4.0 * params.du + 1.0) > 2.0:
                raise NumericalError("Failed to configure simulation: dt={} exceeds the explicit activator limit".format(dt))
            if not self.slaved and dt * (4.0 * params.dv + 1.0) > 2.0 * params.tau:
                raise NumericalError("Failed to configure simulation: dt={} exceeds the explicit inhibitor limit".format(dt))
        else:
            self.u_solver = CirculantSolver(n, 1.0 + dt, -dt * params.du)
            if not self.slaved:
                self.v_solver = CirculantSolver(n, params.tau + dt, -dt * params.dv)

    def constrain(self, u):
        return self.v_constraint.solve(-u * u)

    def step(self, u, v):
        p, dt = self.params, self.cfg.dt
        ratio = u / v
        if self.cfg.mode == 'explicit':
            u_new = u + dt * (p.du * laplacian_apply(u) - u + u * ratio)
            if self.slaved:
                return u_new, self.constrain(u_new)
            return u_new, v + dt / p.tau * (p.dv * laplacian_apply(v) - v + u * u)
        if dt * np.max(np.abs(2.0 * ratio)) > 1.0:
            raise NumericalError("Failed to advance: dt={} is too large for the reaction rate {:.3g}".format(
                dt, np.max(np.abs(2.0 * ratio))))
        u_new = self.u_solver.solve(u + dt * u * ratio)
        if self.slaved:
            return u_new, self.constrain(u_new)
        return u_new, self.v_solver.solve(p.tau * v + dt * u * u)

    def run(self, initial, stop=None):
        '''Integrate from initial; stop(t, u, v) returning True ends the run early'''
        if initial.n != self.params.n:
            raise InvalidInputError("Failed to integrate: state has {} nodes, params expect {}".format(initial.n, self.params.n))
        u = initial.u.copy()
        v = self.constrain(u) if self.slaved else initial.v.copy()
        traj = Trajectory()
        traj.record(0.0, _checked(u, v, 0.0), self.params)
        steps = self.cfg.steps
        for step in range(1, steps + 1):
            u, v = self.step(u, v)
            t = step * self.cfg.dt
            if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v)) and np.all(v > 0)):
                _checked(u, v, t)
            done = stop is not None and stop(t, u, v)
            if step % self.cfg.sample_every == 0 or step == steps or done:
                traj.record(t, _checked(u, v, t), self.params)
                display.vvv(u"t={:.4g} max u={:.6g}".format(t, traj.max_u[-1]))
            if done:
                break
        return traj


def _checked(u, v, t):
    bad = np.flatnonzero(~np.isfinite(u) | ~np.isfinite(v) | ~(v > 0))
    if bad.size:
        node = int(bad[0])
        raise BlowUpError("Failed to integrate: blow-up at t={:.6g}, node {} (u={!r}, v={!r})".format(t, node, u[node], v[node]),
                          time=float(t), node=node)
    return LatticeState(u.copy(), v.copy())


def integrate(params, initial, cfg, stop=None):
    return Integrator(params, cfg).run(initial, stop=stop)


def perturb(state, amp, seed):
    '''Mean-zero activator noise supported where u is nonzero: u (1 + amp xi)'''
    total = float(np.sum(state.u))
    if not total > 0:
        raise InvalidInputError("Failed to perturb state: activator mass {} is not positive".format(total))
    rng = np.random.default_rng(seed)
    xi = rng.uniform(-1.0, 1.0, state.n)
    xi = xi - np.dot(state.u, xi) / total
    return LatticeState(state.u + amp * state.u * xi, state.v.copy())


def floquet_direction(state, j):
    '''cos(2 pi j k / K) on the K spikes of state, in node order; zero elsewhere'''
    nodes = sorted(spike_set(state.u))
    if not nodes:
        raise InvalidInputError("Failed to build Floquet direction: state has no spikes")
    K = len(nodes)
    if int(j) != j or not 0 <= j < K:
        raise InvalidInputError("Failed to build Floquet direction: mode must be in [0, {}), got {}".format(K, j))
    direction = np.zeros(state.n)
    direction[nodes] = np.cos(2.0 * np.pi * int(j) * np.arange(K) / K)
    return direction


def perturb_along(state, direction, amp):
    '''u (1 + amp direction)'''
    direction = np.asarray(direction, dtype=float)
    if direction.shape != state.u.shape:
        raise InvalidInputError("Failed to perturb state: direction has {} entries for {} nodes".format(direction.size, state.n))
    if not np.any(direction * state.u):
        raise InvalidInputError("Failed to perturb state: direction vanishes on the support of u")
    return LatticeState(state.u + amp * state.u * direction, state.v.copy())


def classify_by_simulation(params, state, cfg):
    '''stable, unstable or inconclusive from the growth of a seeded perturbation'''
    residual = float(np.max(np.abs(steady_residual(params, state))))
    if residual > STEADY_TOL * residual_scale(params, state):
        raise InvalidInputError("Failed to classify by simulation: state is not converged (residual {:.3e})".format(residual))
    start = perturb(state, cfg.perturb_amp, cfg.seed)
    base = state.u
    d0 = float(np.linalg.norm(start.u - base))
    if not d0 > 0:
        raise InvalidInputError("Failed to classify by simulation: perturbation is zero (perturb_amp={})".format(cfg.perturb_amp))
    verdict = {}

    def watch(t, u, v):
        dev = float(np.linalg.norm(u - base))
        if dev > GROW * d0:
            verdict['label'] = 'unstable'
        elif dev < SHRINK * d0 and t >= SETTLE_TIME:
            verdict['label'] = 'stable'
        if 'label' in verdict:
            verdict['time'] = t
            return True
        return False

    try:
        integrate(params, start, cfg, stop=watch)
    except BlowUpError as e:
        display.vv(u"Perturbed run blew up: {}".format(e))
        return 'unstable'
    label = verdict.get('label', 'inconclusive')
    if label == 'inconclusive':
        display.warning(u"Simulation up to t={} neither grew nor decayed the perturbation".format(cfg.t_end))
    else:
        display.vv(u"Simulation classified {} at t={:.4g}".format(label, verdict['time']))
    return label


def classify_ensemble(params, state, cfg, seeds, threads=1):
    '''One classification per seed; results follow the order of seeds'''
    def one(seed):
        return classify_by_simulation(params, state, SimConfig(dt=cfg.dt, t_end=cfg.t_end, mode=cfg.mode,
                                                               sample_every=cfg.sample_every, seed=int(seed),
                                                               perturb_amp=cfg.perturb_amp))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, seeds))
    return [one(seed) for seed in seeds]


def _clusters(nodes, n):
    '''Number of cyclically contiguous runs in a node set'''
    if not nodes:
        return 0
    if len(nodes) == n:
        return 1
    return sum(1 for k in nodes if (k - 1) % n not in nodes)


@dataclass
class SpikeTrack:
    times: list
    node_sets: list
    counts: list

    def split(self):
        return any(b > a for a, b in zip(self.counts, self.counts[1:]))

    def expanding(self):
        '''True when the node set never shrinks and ends strictly larger'''
        sizes = [len(s) for s in self.node_sets]
        return all(b >= a for a, b in zip(sizes, sizes[1:])) and sizes[-1] > sizes[0]


def track_spikes(traj):
    if not traj.states:
        raise InvalidInputError("Failed to track spikes: trajectory is empty")
    n = traj.states[0].n
    sets = [spike_set(s.u) for s in traj.states]
    return SpikeTrack(times=list(traj.times), node_sets=sets, counts=[_clusters(s, n) for s in sets])


def trajectory_rows(traj):
    rows = []
    for t, state in zip(traj.times, traj.states):
        for k in range(state.n):
            rows.append((repr(t), k, repr(float(state.u[k])), repr(float(state.v[k]))))
    return rows


def summary_rows(traj):
    track = track_spikes(traj)
    return [(repr(t), count, repr(mu), repr(res))
            for t, count, mu, res in zip(traj.times, track.counts, traj.max_u, traj.residual_norms)]
