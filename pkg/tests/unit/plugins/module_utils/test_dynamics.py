# -*- coding: utf-8 -*-

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import numpy as np
import pytest

from plugins.module_utils.dynamics import (
    SimConfig,
    Trajectory,
    classify_by_simulation,
    classify_ensemble,
    floquet_direction,
    integrate,
    perturb,
    perturb_along,
    spike_set,
    summary_rows,
    track_spikes,
    trajectory_rows,
)
from plugins.module_utils.errors import BlowUpError, InvalidInputError, NumericalError
from plugins.module_utils.lattice import LatticeParams, LatticeState
from plugins.module_utils.mesa import mesa_params, mesa_profile
from plugins.module_utils.reduced_spikes import assemble_profile, newton_refine, three_spike_even_closed_form
from plugins.module_utils.reduced_stability import (
    floquet_eigenvalues,
    lattice_spectrum,
    symmetric_lattice_state,
    symmetric_threshold,
)


def bump(n=20):
    x = np.arange(n)
    u = 1.0 + 0.5 * np.cos(2 * np.pi * x / n)
    return LatticeState(u, np.ones(n))


def test_config_validation():
    with pytest.raises(InvalidInputError):
        SimConfig(dt=0.0)
    with pytest.raises(InvalidInputError):
        SimConfig(dt=0.1, t_end=0.05)
    with pytest.raises(InvalidInputError):
        SimConfig(mode='rk4')
    with pytest.raises(InvalidInputError):
        SimConfig(sample_every=0)
    assert SimConfig(dt=0.01, t_end=1.0).steps == 100


def test_dae_needs_tau_zero():
    with pytest.raises(InvalidInputError):
        integrate(LatticeParams(n=20, du=0.1, dv=1.0, tau=0.5), bump(), SimConfig(dt=0.01, t_end=0.1, mode='dae'))


def test_explicit_step_limit():
    with pytest.raises(NumericalError):
        integrate(LatticeParams(n=20, du=1.0, dv=1.0), bump(), SimConfig(dt=0.5, t_end=1.0, mode='explicit'))


def test_dae_matches_imex_when_tau_is_zero():
    params = LatticeParams(n=20, du=0.05, dv=2.0)
    cfg = dict(dt=0.01, t_end=1.0, sample_every=10)
    dae = integrate(params, bump(), SimConfig(mode='dae', **cfg))
    imex = integrate(params, bump(), SimConfig(mode='imex', **cfg))
    assert dae.times == imex.times
    for a, b in zip(dae.states, imex.states):
        assert np.array_equal(a.u, b.u)


def test_sampling_and_diagnostics():
    params = LatticeParams(n=20, du=0.05, dv=2.0, tau=0.2)
    traj = integrate(params, bump(), SimConfig(dt=0.01, t_end=1.0, sample_every=25))
    assert traj.times == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])
    assert len(traj.states) == len(traj.max_u) == len(traj.spike_sets) == len(traj.residual_norms) == 5
    assert traj.spike_sets[0] == spike_set(bump().u)


def test_rotation_equivariance():
    params = LatticeParams(n=20, du=0.05, dv=2.0, tau=0.2)
    cfg = SimConfig(dt=0.01, t_end=0.5, sample_every=50)
    plain = integrate(params, bump(), cfg).final
    shifted = integrate(params, bump().rotate(7), cfg).final
    assert shifted.u == pytest.approx(plain.rotate(7).u, abs=1e-12)
    assert shifted.v == pytest.approx(plain.rotate(7).v, abs=1e-12)


def test_blow_up_is_reported():
    params = LatticeParams(n=6, du=0.0, dv=0.01, tau=0.1)
    state = LatticeState([1.0, 0, 0, 0, 0, 0], np.ones(6))
    with pytest.raises(BlowUpError) as e:
        integrate(params, state, SimConfig(dt=0.19, t_end=1.9, mode='explicit'))
    assert e.value.details['node'] == 1
    assert e.value.details['time'] == pytest.approx(0.19)


def test_perturb_keeps_mass_and_support():
    u = np.zeros(30)
    u[[0, 15]] = [2.0, 1.0]
    state = LatticeState(u, np.ones(30))
    out = perturb(state, 0.01, seed=4)
    assert np.sum(out.u) == pytest.approx(np.sum(u), abs=1e-14)
    assert np.all(out.u[u == 0] == 0)
    assert not np.array_equal(out.u, u)
    assert np.array_equal(perturb(state, 0.01, seed=4).u, out.u)
    with pytest.raises(InvalidInputError):
        perturb(LatticeState(np.zeros(30), np.ones(30)), 0.01, seed=0)


def test_floquet_direction_and_perturb_along():
    u = np.zeros(30)
    u[[0, 15]] = 2.0
    state = LatticeState(u, np.ones(30))
    direction = floquet_direction(state, 1)
    assert direction[[0, 15]] == pytest.approx([1.0, -1.0])
    assert np.count_nonzero(direction) == 2
    assert floquet_direction(state, 0)[[0, 15]] == pytest.approx([1.0, 1.0])
    out = perturb_along(state, direction, 0.01)
    assert out.u[[0, 15]] == pytest.approx([2.02, 1.98])
    assert np.array_equal(out.v, state.v)
    with pytest.raises(InvalidInputError):
        floquet_direction(state, 2)
    with pytest.raises(InvalidInputError):
        floquet_direction(LatticeState(np.zeros(30), np.ones(30)), 0)
    with pytest.raises(InvalidInputError):
        perturb_along(state, np.ones(29), 0.01)
    with pytest.raises(InvalidInputError):
        perturb_along(state, np.eye(30)[3], 0.01)


def test_steady_state_does_not_drift_in_dae_mode():
    params, state = symmetric_lattice_state(60, 2, 0.2)
    traj = integrate(params, state, SimConfig(dt=0.01, t_end=100.0, mode='dae', sample_every=1000, perturb_amp=0.0))
    assert traj.times[-1] == pytest.approx(100.0)
    assert max(np.max(np.abs(s.u - state.u)) for s in traj.states) < 1e-8


def test_unstable_floquet_mode_grows():
    d = 0.3
    params, state = symmetric_lattice_state(60, 2, d)
    j = int(np.argmax(floquet_eigenvalues(2, d)))
    start = perturb_along(state, floquet_direction(state, j), 1e-3)
    d0 = float(np.linalg.norm(start.u - state.u))

    def grown(t, u, v):
        return np.linalg.norm(u - state.u) > 10.0 * d0

    traj = integrate(params, start, SimConfig(dt=0.01, t_end=50.0, sample_every=100), stop=grown)
    assert np.linalg.norm(traj.final.u - state.u) > 10.0 * d0
    assert traj.times[-1] < 50.0


def test_unconverged_state_is_rejected():
    params = LatticeParams(n=20, du=0.05, dv=2.0)
    with pytest.raises(InvalidInputError):
        classify_by_simulation(params, bump(), SimConfig(dt=0.01, t_end=1.0))


@pytest.mark.parametrize('factor,expected', [(0.9, 'stable'), (1.1, 'unstable')])
def test_simulation_agrees_with_threshold(factor, expected):
    params, state = symmetric_lattice_state(60, 2, factor * symmetric_threshold(2))
    cfg = SimConfig(dt=0.01, t_end=80.0, sample_every=100, seed=1)
    assert classify_by_simulation(params, state, cfg) == expected


def test_ensemble_keeps_seed_order():
    params, state = symmetric_lattice_state(60, 2, 1.1 * symmetric_threshold(2))
    cfg = SimConfig(dt=0.01, t_end=80.0, sample_every=100)
    assert classify_ensemble(params, state, cfg, [3, 4], threads=2) == ['unstable', 'unstable']


def synthetic(node_sets, n=12):
    traj = Trajectory()
    params = LatticeParams(n=n, du=0.1, dv=1.0)
    for t, nodes in enumerate(node_sets):
        u = np.full(n, 0.01)
        u[list(nodes)] = 1.0
        traj.record(float(t), LatticeState(u, np.ones(n)), params)
    return traj


def test_track_spikes_sees_splitting():
    track = track_spikes(synthetic([{3, 4}, {3}, {3, 8}]))
    assert track.counts == [1, 1, 2]
    assert track.split()
    assert not track.expanding()


def test_track_spikes_sees_expansion():
    track = track_spikes(synthetic([{11}, {11, 0}, {10, 11, 0, 1}]))
    assert track.counts == [1, 1, 1]
    assert track.expanding()
    assert not track.split()


def test_rows():
    traj = synthetic([{3}, {3, 4}], n=6)
    rows = trajectory_rows(traj)
    assert len(rows) == 12
    assert rows[0] == (repr(0.0), 0, repr(0.01), repr(1.0))
    summary = summary_rows(traj)
    assert [r[1] for r in summary] == [1, 1]
    with pytest.raises(InvalidInputError):
        track_spikes(Trajectory())


@pytest.mark.slow
def test_stable_three_spike_states_persist():
    n, d = 60, 0.1
    params = LatticeParams.from_d(n, d)
    kept = 0
    for config in three_spike_even_closed_form(d):
        state = newton_refine(assemble_profile(config, n), params).state
        if lattice_spectrum(params, state).classification != 'stable':
            continue
        kept += 1
        start = perturb(state, 1e-3, seed=kept)
        traj = integrate(params, start, SimConfig(dt=0.02, t_end=200.0, sample_every=500))
        support = np.flatnonzero(state.u > 1e-6 * np.max(state.u))
        assert np.array_equal(np.flatnonzero(traj.final.u > 1e-6 * np.max(traj.final.u)), support)
        assert np.max(np.abs(traj.final.u - state.u)) < 1e-2 * np.max(state.u)
    assert kept >= 1


def one_spike_run(kappa, dt, t_end):
    _, state = mesa_profile(49, 1, 5.0, 1e-3)
    cfg = SimConfig(dt=dt, t_end=t_end, sample_every=int(round(2.0 / dt)), perturb_amp=0.0)
    return track_spikes(integrate(mesa_params(49, kappa, 1e-3), state, cfg))


def test_spike_above_fold_stays_put():
    track = one_spike_run(5.0, 0.01, 50.0)
    assert all(nodes == {0} for nodes in track.node_sets)
    assert not track.expanding()


@pytest.mark.slow
def test_spike_below_fold_at_small_du_becomes_a_front():
    track = one_spike_run(3.5, 0.005, 150.0)
    assert track.node_sets[0] == {0}
    assert track.expanding()
    assert not track.split()
    assert all(count == 1 for count in track.counts)
