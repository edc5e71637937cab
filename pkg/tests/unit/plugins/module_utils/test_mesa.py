# -*- coding: utf-8 -*-

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import numpy as np
import pytest

from plugins.module_utils.errors import InvalidInputError, NonexistenceError
from plugins.module_utils.lattice import pencil_eigenvalues, residual_scale, steady_residual
from plugins.module_utils.mesa import (
    compose_mesas,
    eta_fixed_points,
    eta_recursion,
    eta_trace_rows,
    first_tail_values,
    fold_kappa,
    leading_order,
    mesa_existence,
    mesa_leading_spectrum,
    mesa_params,
    mesa_profile,
)
from plugins.module_utils.reduced_stability import lattice_spectrum

N, EPS2, KAPPA = 49, 0.001, 5.0

PLUS_VARIANTS = [
    ['+'] + ['-'] * 23,
    ['-', '+'] + ['-'] * 22,
    ['+', '+'] + ['-'] * 22,
]


def test_recursion_needs_kappa_four():
    with pytest.raises(NonexistenceError) as e:
        eta_recursion(3.99, 5)
    assert e.value.details['step'] == 2
    eta = eta_recursion(4.01, 5)
    assert eta[0] == 1.0
    assert np.all(eta[1:] < 0.5)


def test_recursion_values():
    assert eta_recursion(4.0, 2)[1] == pytest.approx(0.5, abs=1e-15)
    assert eta_recursion(5.0, 2)[1] == pytest.approx((1 - np.sqrt(0.2)) / 2, abs=1e-15)
    assert eta_recursion(5.0, 2)[1] == pytest.approx(0.27639, abs=1e-5)
    assert eta_recursion(5.0, 2, branch=['+'])[1] == pytest.approx((1 + np.sqrt(0.2)) / 2, abs=1e-15)


def test_recursion_sandwich_and_decay():
    eta = eta_recursion(KAPPA, 10)
    assert np.all(eta[1:] > eta[:-1] / KAPPA)
    assert np.all(eta[1:] < 1)
    eta = eta_recursion(KAPPA, 30)
    steps = np.abs(np.diff(eta))
    assert np.all(np.diff(steps) < 0)
    assert eta[-1] == pytest.approx(eta_fixed_points(KAPPA)[0], abs=1e-15)


def test_recursion_branch_validation():
    with pytest.raises(InvalidInputError):
        eta_recursion(5.0, 3, branch=['-'])
    with pytest.raises(InvalidInputError):
        eta_recursion(5.0, 2, branch=['x'])
    with pytest.raises(InvalidInputError):
        eta_recursion(0.0, 2)


def test_clamped_recursion_below_fold():
    eta = eta_recursion(3.0, 4, clamp=True)
    assert np.all(np.isfinite(eta))


def test_first_tail_values():
    minus, plus, v = first_tail_values(KAPPA)
    assert minus == pytest.approx(eta_recursion(KAPPA, 2)[1] * v, abs=1e-12)
    assert plus == pytest.approx(eta_recursion(KAPPA, 2, branch=['+'])[1] * v, abs=1e-12)
    with pytest.raises(NonexistenceError):
        first_tail_values(3.5)


def test_leading_order_shape():
    profile = leading_order(N, 10, KAPPA, EPS2)
    assert profile.tail_length == 20
    assert np.all(profile.u0[:10] == 1.0)
    dist = profile.tail_distance()
    assert dist[10] == 1 and dist[48] == 1 and dist[29] == 20
    assert profile.v0[11] / profile.v0[10] == pytest.approx(KAPPA * EPS2)
    # symmetric about the plateau
    assert profile.u0[10:] == pytest.approx(profile.u0[10:][::-1])


@pytest.mark.parametrize('m', [1, 10])
def test_mesa_exists_and_is_stable(m):
    profile, state = mesa_profile(N, m, KAPPA, EPS2)
    params = profile.params()
    assert np.max(np.abs(steady_residual(params, state))) < 1e-10 * residual_scale(params, state)
    assert lattice_spectrum(params, state).classification == 'stable'
    assert state.v[m + 1] / state.v[m] == pytest.approx(KAPPA * EPS2, rel=0.1)
    assert np.all(mesa_leading_spectrum(profile) < 0)


@pytest.mark.parametrize('branch', PLUS_VARIANTS)
def test_plus_branches_are_unstable(branch):
    profile = leading_order(N, 1, KAPPA, EPS2, branch=branch)
    assert np.max(mesa_leading_spectrum(profile)) > 0
    profile, state = mesa_profile(N, 1, KAPPA, EPS2, branch=branch)
    assert lattice_spectrum(profile.params(), state).classification == 'unstable'


def test_plateau_leading_eigenvalue():
    profile = leading_order(N, 10, KAPPA, EPS2)
    assert mesa_leading_spectrum(profile)[:10] == pytest.approx(-1.0)


def test_plateau_eigenvalue_against_dense_spectrum():
    profile, state = mesa_profile(N, 10, KAPPA, EPS2)
    dense = pencil_eigenvalues(profile.params(), state)
    assert mesa_leading_spectrum(profile)[:10] == pytest.approx(-1.0)
    near = (np.abs(dense.real + 1.0) < 0.1) & (np.abs(dense.imag) < 0.1)
    assert np.count_nonzero(near) >= 10
    assert np.max(dense.real) < 0


def test_mesa_profile_rejects_small_kappa():
    with pytest.raises(NonexistenceError):
        mesa_profile(N, 1, 3.9, EPS2)
    with pytest.raises(InvalidInputError):
        mesa_profile(N, 49, KAPPA, EPS2)
    with pytest.raises(InvalidInputError):
        mesa_params(N, KAPPA, 0.0)


def test_two_mesas_compose():
    state = compose_mesas(N, [1, 10], [19, 19], KAPPA, EPS2)
    params = mesa_params(N, KAPPA, EPS2)
    assert np.max(np.abs(steady_residual(params, state))) < 1e-10 * residual_scale(params, state)
    assert np.sum(state.u > 0.5) == 11


def test_compose_validation():
    with pytest.raises(InvalidInputError):
        compose_mesas(N, [1, 10], [19], KAPPA, EPS2)
    with pytest.raises(InvalidInputError):
        compose_mesas(N, [1, 10], [19, 18], KAPPA, EPS2)


def test_eta_trace_rows():
    profile = leading_order(9, 1, KAPPA, EPS2, branch=['-', '+', '-', '-'])
    rows = eta_trace_rows(profile)
    assert [r[0] for r in rows] == [1, 2, 3, 4, 5]
    assert [r[2] for r in rows] == ['', '-', '+', '-', '-']


def test_existence_straddles_four():
    assert mesa_existence(4.5, 1e-4, N, 1)
    assert not mesa_existence(3.0, 1e-4, N, 1)


@pytest.mark.slow
def test_fold_kappa_near_four():
    assert 3.8 <= fold_kappa(1e-4, N, 1) <= 4.2


@pytest.mark.slow
def test_fold_kappa_approaches_four():
    folds = [fold_kappa(eps2, N, 1) for eps2 in (1e-3, 1e-4, 1e-5)]
    assert all(3.8 <= k <= 4.2 for k in folds)
    gaps = [abs(k - 4.0) for k in folds]
    assert gaps[1] <= gaps[0] + 2e-3
    assert gaps[2] <= gaps[1] + 2e-3
