# -*- coding: utf-8 -*-

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import numpy as np
import pytest

from plugins.module_utils.continuation import (
    Branch,
    BranchPoint,
    Continuation,
    FoldScanPoint,
    ParameterFamily,
    _record_stalled_fold,
    branch_contact,
    branch_rows,
    check_monotone,
    continue_branch,
    fold_scan_kappa,
    fold_scan_point,
    profile_kind,
    state_weights,
)
from plugins.module_utils.commands import branch_start
from plugins.module_utils.errors import InvalidInputError
from plugins.module_utils.lattice import LatticeParams, LatticeState, steady_residual
from plugins.module_utils.mesa import mesa_params, mesa_profile

N = 60


def start_params(start, spikes=2, d0=0.2, d1=0.35, separation=0.5):
    return dict(n=N, start=start, spikes=spikes, separation=separation, parameter='d', range=[d0, d1],
                du=0.0, tau=0.0, m=1, eps2=None)


def follow(start, spikes=2, d0=0.2, d1=0.35, step0=0.01):
    base, state = branch_start(start_params(start, spikes, d0, d1))
    return continue_branch(base, state, 'd', (d0, d1), step0)


def dummy_state(n=4):
    return LatticeState(np.ones(n), np.ones(n))


def line(points):
    branch = Branch(parameter_name='d')
    for p, m in points:
        branch.points.append(BranchPoint(param=p, max_u=m, state=dummy_state(), stable=True))
    return branch


@pytest.mark.parametrize('name,p', [('d', 0.2), ('kappa', 5.0), ('Dv', 3.0)])
def test_dfdp_matches_finite_differences(name, p):
    family = ParameterFamily(LatticeParams(n=12, du=0.01, dv=1.0), name)
    rng = np.random.default_rng(0)
    state = LatticeState(rng.uniform(0.1, 1.0, 12), rng.uniform(0.5, 2.0, 12))
    h = 1e-6 * p
    fd = (steady_residual(family.params(p + h), state) - steady_residual(family.params(p - h), state)) / (2 * h)
    assert family.dfdp(state, p) == pytest.approx(fd, rel=1e-6, abs=1e-6)


def test_family_validation():
    with pytest.raises(InvalidInputError):
        ParameterFamily(LatticeParams(n=12), 'tau')
    with pytest.raises(InvalidInputError):
        ParameterFamily(LatticeParams(n=12, du=0.0), 'kappa')
    with pytest.raises(InvalidInputError):
        continue_branch(LatticeParams(n=12), dummy_state(12), 'd', (0.2, 0.2), 0.01)


def test_contact_of_crossing_branches():
    a = line([(0.0, 0.0), (1.0, 1.0)])
    b = line([(0.0, 1.0), (1.0, 0.0)])
    gap, where, touching = branch_contact(a, b)
    assert gap == 0.0
    assert where == pytest.approx(0.5)
    assert touching


def test_contact_of_parallel_branches():
    a = line([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)])
    b = line([(0.0, 0.5), (2.0, 0.5)])
    gap, _, touching = branch_contact(a, b)
    assert gap == pytest.approx(0.5)
    assert not touching
    with pytest.raises(InvalidInputError):
        branch_contact(line([(0.0, 0.0)]), b)


def test_profile_kind():
    u = np.full(10, 0.01)
    u[0] = 1.0
    assert profile_kind(LatticeState(u, np.ones(10)), 0) == 'spike'
    u[[1, 9]] = 0.9
    assert profile_kind(LatticeState(u, np.ones(10)), 0) == 'mesa'
    u = np.full(10, 0.01)
    u[[1, 9]] = 1.0
    assert profile_kind(LatticeState(u, np.ones(10)), 0) == 'dimple'
    u = np.full(10, 0.01)
    u[5] = 1.0
    assert profile_kind(LatticeState(u, np.ones(10)), 0) == 'shifted'


def test_check_monotone():
    rising = [FoldScanPoint(du=0.001, kappa_f=4.01), FoldScanPoint(du=0.01, kappa_f=4.2), FoldScanPoint(du=0.005)]
    assert check_monotone(rising)
    assert not check_monotone(rising + [FoldScanPoint(du=0.1, kappa_f=4.1)])


def test_state_weights_resolve_small_components():
    weights = state_weights(np.array([1.0, -1e-3, 0.0]))
    assert weights == pytest.approx(np.array([1.0, 1e-3, 1e-12]) * np.sqrt(2), rel=1e-12)
    assert np.all(state_weights(np.zeros(3)) > 0)


def test_reweight_keeps_point_and_direction():
    family = ParameterFamily(LatticeParams(n=4, du=0.01, dv=0.04), 'kappa')
    cont = Continuation(family, np.ones(8))
    x = np.array([1.0, 1e-2, 1e-4, 1e-2, 1.0, 5e-2, 1e-3, 5e-2])
    t = np.r_[np.linspace(-1.0, 1.0, 8), 0.5]
    t /= np.linalg.norm(t)
    y, t_new = cont.reweight(np.r_[x, 4.0], t)
    assert cont.weights * y[:-1] == pytest.approx(x, rel=1e-12)
    assert y[-1] == 4.0
    assert np.linalg.norm(t_new) == pytest.approx(1.0)
    back = np.r_[cont.weights * t_new[:-1], t_new[-1]]
    assert back / np.linalg.norm(back) == pytest.approx(t / np.linalg.norm(t), abs=1e-12)


def test_stalled_fold_marks_last_point_once():
    branch = line([(4.5, 1.0), (4.1, 1.1)])
    _record_stalled_fold(branch, np.array([1.0, 0.01]))
    _record_stalled_fold(branch, np.array([1.0, 0.01]))
    assert branch.folds == [4.1]
    assert branch.points[-1].fold_flag
    assert not branch.points[0].fold_flag


def test_branch_rows():
    branch = line([(0.25, 3.0)])
    branch.points[0].fold_flag = True
    assert branch_rows(branch) == [(repr(0.25), repr(3.0), 'true', 'true')]


@pytest.mark.slow
def test_single_spike_has_no_fold():
    branch = follow('single', spikes=1, d0=0.05, d1=1.0, step0=0.02)
    assert branch.folds == []
    assert branch.params[-1] > 0.9
    assert all(p.stable for p in branch.points)


@pytest.mark.slow
def test_two_spike_asymmetric_fold():
    branch = follow('asymmetric')
    assert branch.folds
    assert abs(branch.folds[0] - 0.2836) < 0.01

    interior = next(p for p in branch.points if 0.24 < p.param < 0.26)
    restarted = continue_branch(LatticeParams.from_d(N, interior.param), interior.state, 'd', (interior.param, 0.35), 0.01)
    assert restarted.folds
    assert abs(restarted.folds[0] - branch.folds[0]) < 1e-3


@pytest.mark.slow
def test_three_spike_fold_and_contact():
    asymmetric = follow('three_asymmetric', spikes=3, d1=0.25)
    assert asymmetric.folds
    assert abs(asymmetric.folds[0] - 0.2171) < 0.01
    symmetric = follow('symmetric', spikes=3, d1=0.25)
    assert symmetric.stability_changes
    gap, where, _ = branch_contact(asymmetric, symmetric)
    assert abs(where - 0.2163) < 0.01
    assert gap < 0.05 * np.max(symmetric.measures)


@pytest.mark.slow
def test_fold_scan_point_near_four():
    point = fold_scan_point(1e-3, 49)
    assert point.error is None
    assert point.kappa_f is not None
    assert 3.8 <= point.kappa_f <= 4.2


@pytest.mark.slow
def test_one_spike_branch_in_kappa_reaches_its_fold():
    _, state = mesa_profile(49, 1, 6.0, 1e-3)
    branch = continue_branch(mesa_params(49, 6.0, 1e-3), state, 'kappa', (6.0, 3.0), 0.05)
    assert branch.folds
    assert 3.8 < branch.folds[0] < 4.1
    assert min(branch.params) == pytest.approx(branch.folds[0], abs=0.02)


@pytest.mark.slow
def test_fold_curve_rises_with_du():
    curve = fold_scan_kappa([1e-2, 1e-3, 3e-3], 49)
    assert [pt.du for pt in curve] == [1e-3, 3e-3, 1e-2]
    assert all(pt.kappa_f is not None for pt in curve)
    assert curve[0].kappa_f < curve[-1].kappa_f
    assert check_monotone(curve)
