# -*- coding: utf-8 -*-
"""Pseudo-arclength continuation of lattice steady states.

Unknowns are y = (x / w, p) with x = (u, v) and p the continuation
parameter (d, kappa or Dv). Component i has the weight
w_i = max(|x_i|, WEIGHT_FLOOR max|x|) sqrt(r), r being the number of entries
above the floor, refreshed at every accepted point. A unit of arclength in the
state is then an RMS relative change, and mesa tails of size eps^(2j) register
as much as the plateau does.
"""

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ansible.utils.display import Display

from .errors import DomainError, GMLatticeError, InvalidInputError, NumericalError
from .lattice import LatticeState, full_jacobian, laplacian_apply, residual_scale, steady_residual
from .mesa import mesa_params, mesa_profile
from .reduced_spikes import newton_refine
from .reduced_stability import MARGINAL_TOL, lattice_spectrum

display = Display()

PARAMETERS = ('d', 'kappa', 'Dv')
CORRECTOR_TOL = 1e-10
ACCEPT_TOL = 1e-9
CORRECTOR_MAX_ITER = 15
MIN_STEP = 1e-5
MAX_STEP_FRACTION = 0.05
GROWTH = 1.3
GROW_AFTER = 3
REFINE_RTOL = 1e-4
REFINE_MAX_ITER = 60
MAX_POINTS = 5000
CONTACT_TOL = 1e-3
WEIGHT_FLOOR = 1e-12
FOLD_TANGENT_RATIO = 0.2


class ParameterFamily(object):
    '''Lattice parameters and dF/dp along one continuation parameter'''

    def __init__(self, base, name):
        if name not in PARAMETERS:
            raise InvalidInputError("Failed to continue: parameter must be one of {}, got {}".format(', '.join(PARAMETERS), name))
        if name == 'kappa' and not base.du > 0:
            raise InvalidInputError("Failed to continue in kappa: D_u must be positive")
        self.base = base
        self.name = name

    def params(self, p):
        if self.name == 'd':
            return self.base.replace(dv=p * p * self.base.n ** 2)
        if self.name == 'kappa':
            return self.base.replace(dv=p * self.base.du)
        return self.base.replace(dv=p)

    def dfdp(self, state, p):
        if self.name == 'd':
            factor = 2.0 * p * self.base.n ** 2
        elif self.name == 'kappa':
            factor = self.base.du
        else:
            factor = 1.0
        return np.concatenate([np.zeros(state.n), factor * laplacian_apply(state.v)])


@dataclass
class BranchPoint:
    param: float
    max_u: float
    state: LatticeState
    stable: bool
    fold_flag: bool = False
    classification: str = ''


@dataclass
class Branch:
    parameter_name: str
    points: list = field(default_factory=list)
    folds: list = field(default_factory=list)
    stability_changes: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)

    @property
    def params(self):
        return np.array([p.param for p in self.points])

    @property
    def measures(self):
        return np.array([p.max_u for p in self.points])


def state_weights(x):
    '''Per-component weights; the RMS runs over the components above the floor'''
    x = np.abs(np.asarray(x, dtype=float))
    floor = WEIGHT_FLOOR * max(float(np.max(x)), 1e-300)
    resolved = max(int(np.count_nonzero(x > floor)), 1)
    return np.maximum(x, floor) * np.sqrt(resolved)


class _CorrectorFailed(Exception):
    pass


class Continuation(object):

    def __init__(self, family, weights, marginal_tol=MARGINAL_TOL):
        self.family = family
        self.weights = weights
        self.marginal_tol = marginal_tol

    def split(self, y):
        return LatticeState.from_vector(self.weights * y[:-1]), y[-1]

    def reweight(self, y, t):
        '''Express y and t in weights taken from the state at y'''
        x = self.weights * y[:-1]
        tx = self.weights * t[:-1]
        self.weights = state_weights(x)
        t = np.r_[tx / self.weights, t[-1]]
        return np.r_[x / self.weights, y[-1]], t / np.linalg.norm(t)

    def residual(self, y):
        state, p = self.split(y)
        params = self.family.params(p)
        return state, params, steady_residual(params, state)

    def augmented(self, y, tangent):
        state, p = self.split(y)
        params = self.family.params(p)
        top = np.hstack([full_jacobian(params, state) * self.weights, self.family.dfdp(state, p)[:, None]])
        return np.vstack([top, tangent[None, :]])

    def tangent(self, y, previous):
        rhs = np.zeros(y.size)
        rhs[-1] = 1.0
        try:
            t = scipy.linalg.solve(self.augmented(y, previous), rhs)
        except (scipy.linalg.LinAlgError, ValueError) as e:
            raise NumericalError("Failed to compute branch tangent: {}".format(e))
        return t / np.linalg.norm(t)

    def correct(self, y_pred, tangent):
        y = y_pred.copy()
        for _ in range(CORRECTOR_MAX_ITER):
            try:
                state, params, f = self.residual(y)
            except DomainError:
                raise _CorrectorFailed("left the domain v > 0")
            norm = float(np.max(np.abs(f)))
            if not np.isfinite(norm):
                raise _CorrectorFailed("non-finite residual")
            if norm <= CORRECTOR_TOL * residual_scale(params, state):
                return y
            g = np.r_[f, np.dot(tangent, y - y_pred)]
            try:
                y = y - scipy.linalg.solve(self.augmented(y, tangent), g)
            except (scipy.linalg.LinAlgError, ValueError) as e:
                raise _CorrectorFailed(str(e))
        raise _CorrectorFailed("no convergence in {} corrector steps".format(CORRECTOR_MAX_ITER))

    def point(self, y, fold_flag=False):
        state, p = self.split(y)
        params = self.family.params(p)
        residual = float(np.max(np.abs(steady_residual(params, state))))
        if residual > ACCEPT_TOL * residual_scale(params, state):
            raise _CorrectorFailed("accepted point has residual {:.3e}".format(residual))
        report = lattice_spectrum(params, state, self.marginal_tol)
        return BranchPoint(param=float(p), max_u=float(np.max(state.u)), state=state,
                           stable=report.classification == 'stable', fold_flag=fold_flag,
                           classification=report.classification)

    def bisect(self, y_a, t_a, s_hi, predicate, p_ref):
        '''Shrink [0, s_hi] along the predictor from y_a until predicate changes within REFINE_RTOL in p'''
        s_lo = 0.0
        y_lo, y_hi = y_a, self.correct(y_a + s_hi * t_a, t_a)
        for _ in range(REFINE_MAX_ITER):
            if abs(y_hi[-1] - y_lo[-1]) <= REFINE_RTOL * max(abs(p_ref), 1e-12):
                break
            s_mid = 0.5 * (s_lo + s_hi)
            y_mid = self.correct(y_a + s_mid * t_a, t_a)
            if predicate(y_mid):
                s_hi, y_hi = s_mid, y_mid
            else:
                s_lo, y_lo = s_mid, y_mid
        return y_lo, y_hi


def continue_branch(params, start, parameter, range_, step0, marginal_tol=MARGINAL_TOL, max_points=MAX_POINTS):
    '''Follow the branch through start from range_[0] towards range_[1]'''
    family = ParameterFamily(params, parameter)
    p0, p1 = float(range_[0]), float(range_[1])
    if p0 == p1:
        raise InvalidInputError("Failed to continue: empty parameter range")
    lo, hi = min(p0, p1), max(p0, p1)
    width = hi - lo
    ds_max = MAX_STEP_FRACTION * width
    ds = min(max(float(step0), MIN_STEP), ds_max)

    start = newton_refine(start, family.params(p0)).state
    weights = state_weights(start.as_vector())
    cont = Continuation(family, weights, marginal_tol)
    y = np.r_[start.as_vector() / weights, p0]
    seed = np.zeros(y.size)
    seed[-1] = 1.0 if p1 > p0 else -1.0
    t = cont.tangent(y, seed)
    if np.dot(t, seed) < 0:
        t = -t

    branch = Branch(parameter_name=parameter)
    branch.points.append(cont.point(y))
    successes = 0
    steepest = abs(t[-1])
    while len(branch.points) < max_points:
        try:
            y_new = cont.correct(y + ds * t, t)
            t_new = cont.tangent(y_new, t)
            new_point = cont.point(y_new)
        except (_CorrectorFailed, NumericalError) as e:
            ds *= 0.5
            successes = 0
            if ds < MIN_STEP:
                message = "corrector failed at p={:.6g} with step below {}: {}".format(y[-1], MIN_STEP, e)
                branch.diagnostics.append(message)
                display.warning(u"Branch truncated: {}".format(message))
                if abs(t[-1]) < FOLD_TANGENT_RATIO * steepest:
                    _record_stalled_fold(branch, t)
                break
            continue
        p_new = y_new[-1]
        if not lo <= p_new <= hi:
            break

        previous = branch.points[-1]
        if t_new[-1] * t[-1] < 0:
            _record_fold(cont, branch, y, t, ds)
        elif new_point.classification != previous.classification:
            _record_crossing(cont, branch, y, t, ds, previous.classification)

        branch.points.append(new_point)
        display.vvv(u"{}={:.6g} max u={:.6g} {} (step {:.3g})".format(parameter, p_new, new_point.max_u,
                                                                      new_point.classification, ds))
        y, t = cont.reweight(y_new, t_new)
        steepest = max(steepest, abs(t[-1]))
        successes += 1
        if successes >= GROW_AFTER:
            ds = min(ds * GROWTH, ds_max)
            successes = 0
    if len(branch.points) >= max_points:
        message = "stopped after {} points at p={:.6g}".format(max_points, y[-1])
        branch.diagnostics.append(message)
        display.warning(u"Branch truncated: {}".format(message))
    display.vv(u"Branch in {}: {} points, folds {}".format(parameter, len(branch.points), branch.folds))
    return branch


def _record_fold(cont, branch, y, t, ds):
    sign = np.sign(t[-1])

    def turned(y_mid):
        return np.sign(cont.tangent(y_mid, t)[-1]) != sign

    try:
        y_lo, y_hi = cont.bisect(y, t, ds, turned, y[-1])
        pick = max if sign > 0 else min
        y_fold = pick((y_lo, y_hi), key=lambda yy: yy[-1])
        point = cont.point(y_fold, fold_flag=True)
    except (_CorrectorFailed, NumericalError) as e:
        y_fold = y
        point = None
        branch.diagnostics.append("fold refinement failed near p={:.6g}: {}".format(y[-1], e))
    branch.folds.append(float(y_fold[-1]))
    if point is not None:
        branch.points.append(point)
    display.vv(u"Fold at {}={:.6g}".format(branch.parameter_name, y_fold[-1]))


def _record_stalled_fold(branch, t):
    '''The step collapsed where the branch had nearly stopped moving in p; take the last point as the fold'''
    last = branch.points[-1]
    if last.fold_flag:
        return
    last.fold_flag = True
    branch.folds.append(last.param)
    branch.diagnostics.append("fold taken at the last point p={:.6g} (tangent p-component {:.3g})".format(last.param, t[-1]))
    display.vv(u"Fold at {}={:.6g} from step collapse".format(branch.parameter_name, last.param))


def _record_crossing(cont, branch, y, t, ds, before):
    def changed(y_mid):
        return cont.point(y_mid).classification != before

    try:
        y_lo, y_hi = cont.bisect(y, t, ds, changed, y[-1])
        p_cross = 0.5 * (y_lo[-1] + y_hi[-1])
    except (_CorrectorFailed, NumericalError) as e:
        p_cross = float(y[-1])
        branch.diagnostics.append("stability crossing refinement failed near p={:.6g}: {}".format(y[-1], e))
    branch.stability_changes.append(float(p_cross))
    display.vv(u"Stability change at {}={:.6g}".format(branch.parameter_name, p_cross))


def _segment_gap(a0, a1, b0, b1):
    def point_segment(p, s0, s1):
        d = s1 - s0
        length = np.dot(d, d)
        w = 0.0 if length == 0 else np.clip(np.dot(p - s0, d) / length, 0.0, 1.0)
        return float(np.linalg.norm(p - (s0 + w * d)))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    d1, d2 = cross(b0, b1, a0), cross(b0, b1, a1)
    d3, d4 = cross(a0, a1, b0), cross(a0, a1, b1)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return 0.0
    return min(point_segment(a0, b0, b1), point_segment(a1, b0, b1),
               point_segment(b0, a0, a1), point_segment(b1, a0, a1))


def branch_contact(branch_a, branch_b, tol=CONTACT_TOL):
    '''Smallest gap between two branches in the (parameter, max u) plane.

    Returns (gap, parameter at the closest approach, touching).
    '''
    pa = np.column_stack([branch_a.params, branch_a.measures])
    pb = np.column_stack([branch_b.params, branch_b.measures])
    if len(pa) < 2 or len(pb) < 2:
        raise InvalidInputError("Failed to compare branches: each branch needs at least two points")
    best = (np.inf, None)
    for i in range(len(pa) - 1):
        for j in range(len(pb) - 1):
            gap = _segment_gap(pa[i], pa[i + 1], pb[j], pb[j + 1])
            if gap < best[0]:
                best = (gap, 0.25 * (pa[i][0] + pa[i + 1][0] + pb[j][0] + pb[j + 1][0]))
    return best[0], best[1], best[0] < tol


def profile_kind(state, center):
    '''spike, mesa or dimple relative to the node the pattern was built around'''
    top = float(np.max(state.u))
    high = set(int(k) for k in np.flatnonzero(state.u > 0.5 * top))
    if center in high:
        return 'spike' if len(high) == 1 else 'mesa'
    near = any(min((k - center) % state.n, (center - k) % state.n) <= 2 for k in high)
    return 'dimple' if near else 'shifted'


@dataclass
class FoldScanPoint:
    du: float
    kappa_f: float = None
    connected: bool = None
    error: str = None


def fold_scan_point(du, n, kappa_start=6.0, kappa_end=3.0, step0=0.05):
    '''Continue the one-spike branch downward in kappa at this D_u and locate its first fold'''
    try:
        _, state = mesa_profile(n, 1, kappa_start, du)
        branch = continue_branch(mesa_params(n, kappa_start, du), state, 'kappa', (kappa_start, kappa_end), step0)
    except GMLatticeError as e:
        display.warning(u"Fold scan failed at D_u={}: {}".format(du, e))
        return FoldScanPoint(du=float(du), error=str(e))
    if not branch.folds:
        display.warning(u"No fold in kappa found at D_u={}".format(du))
        return FoldScanPoint(du=float(du))
    fold = branch.folds[0]
    index = next(i for i, p in enumerate(branch.points) if p.fold_flag) if any(p.fold_flag for p in branch.points) else 0
    connected = any(profile_kind(p.state, 0) == 'dimple' for p in branch.points[index:])
    return FoldScanPoint(du=float(du), kappa_f=float(fold), connected=connected)


def fold_scan_kappa(du_grid, n, kappa_start=6.0, kappa_end=3.0, step0=0.05, threads=1):
    '''Fold of the one-spike branch in kappa for each D_u, sorted by D_u'''
    grid = sorted(float(du) for du in du_grid)
    if not grid or any(not du > 0 for du in grid):
        raise InvalidInputError("Failed to scan folds: D_u grid must be nonempty and positive")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            curve = list(pool.map(lambda du: fold_scan_point(du, n, kappa_start, kappa_end, step0), grid))
    else:
        curve = [fold_scan_point(du, n, kappa_start, kappa_end, step0) for du in grid]
    check_monotone(curve)
    return curve


def check_monotone(curve):
    '''Warn wherever kappa_f decreases along increasing D_u; returns True when monotone'''
    found = sorted((pt for pt in curve if pt.kappa_f is not None), key=lambda pt: pt.du)
    monotone = True
    for a, b in zip(found, found[1:]):
        if b.kappa_f < a.kappa_f:
            display.warning(u"Fold curve not monotone: kappa_f={:.4f} at D_u={} after {:.4f} at D_u={}".format(
                b.kappa_f, b.du, a.kappa_f, a.du))
            monotone = False
    return monotone


def branch_rows(branch):
    return [(repr(p.param), repr(p.max_u), str(p.stable).lower(), str(p.fold_flag).lower()) for p in branch.points]
