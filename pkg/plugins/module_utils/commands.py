# -*- coding: utf-8 -*-
"""Argument specs and handlers shared by the gm_* modules and gm_cli.py.

Every subcommand has one argument spec in Ansible form. A handler takes the
validated parameters and a RunDirectory, writes its artifacts and returns
the JSON-able summary.
"""

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ansible.utils.display import Display

from .artifacts import RunDirectory, default_output_dir
from .continuation import branch_rows, check_monotone, continue_branch, fold_scan_point
from .discrete_exact import critical_Dv, exact_spectrum, exact_symmetric_solution
from .dynamics import (
    SimConfig,
    classify_by_simulation,
    floquet_direction,
    integrate,
    perturb,
    perturb_along,
    summary_rows,
    track_spikes,
    trajectory_rows,
)
from .errors import GMLatticeError, InvalidInputError, NonexistenceError
from .lattice import LatticeParams, LatticeState, steady_residual
from .mesa import eta_trace_rows, fold_kappa, mesa_leading_spectrum, mesa_params, mesa_profile
from .reduced_spikes import (
    assemble_profile,
    even_positions,
    newton_refine,
    solve_heights,
    three_spike_asymmetric_limit,
    three_spike_even_closed_form,
    two_spike_closed_form,
)
from .reduced_stability import (
    MARGINAL_TOL,
    lattice_spectrum,
    lattice_symmetric_threshold,
    probe_trials,
    reduced_spectrum,
    symmetric_lattice_state,
    symmetric_threshold,
    two_spike_threshold,
)

display = Display()

SUBCOMMANDS = ('construct', 'stability', 'threshold', 'exact', 'mesa', 'simulate', 'continue', 'sweep')

SUMMARIES = {
    'construct': 'Solve reduced spike heights and build the lattice states',
    'stability': 'Classify spike configurations by reduced and full-lattice spectra',
    'threshold': 'Closed-form and finite-n stability thresholds in d',
    'exact': 'Exact symmetric K-spike state with D_u = 0, its spectrum and critical D_v',
    'mesa': 'Leading-order mesa, its lattice refinement and stability',
    'simulate': 'Integrate the lattice system in time from a spike, exact, mesa or file state',
    'continue': 'Pseudo-arclength continuation of a steady state in d, kappa or D_v',
    'sweep': 'Resumable parameter sweeps of critical D_v and fold points',
}

COMMON = dict(
    output_dir=dict(type='path'),
    seed=dict(type='int', default=0),
    threads=dict(type='int', default=1),
)
CLASSIFYING = dict(
    marginal_tol=dict(type='float', default=MARGINAL_TOL),
)
DIFFUSION = dict(
    du=dict(type='float', default=0.0, aliases=['Du', 'D_u']),
    tau=dict(type='float', default=0.0),
)


def _spec(*parts, **options):
    out = {}
    for part in parts:
        out.update(part)
    out.update(options)
    return out


ARGUMENT_SPECS = {
    'construct': _spec(
        COMMON, DIFFUSION,
        n=dict(type='int', required=True),
        spikes=dict(type='int', aliases=['K']),
        d=dict(type='float', required=True),
        positions=dict(type='list', elements='float'),
        refine=dict(type='bool', default=True),
    ),
    'stability': _spec(
        COMMON, CLASSIFYING, DIFFUSION,
        n=dict(type='int', default=60),
        spikes=dict(type='int', required=True, aliases=['K']),
        d=dict(type='float', required=True),
        positions=dict(type='list', elements='float'),
        method=dict(type='str', default='reduced', choices=['reduced', 'lattice', 'both']),
        probe=dict(type='bool', default=False),
        sigma=dict(type='float', default=0.005),
        trials=dict(type='int', default=20),
        lattice_threshold=dict(type='bool', default=False),
    ),
    'threshold': _spec(
        COMMON, CLASSIFYING,
        spikes=dict(type='int', required=True, aliases=['K']),
        separation=dict(type='float', aliases=['l']),
        n=dict(type='int'),
    ),
    'exact': _spec(
        COMMON, CLASSIFYING,
        n=dict(type='int', required=True),
        spikes=dict(type='int', required=True, aliases=['K']),
        dv=dict(type='float', required=True, aliases=['Dv', 'D_v']),
        tau=dict(type='float', default=0.0),
        dense=dict(type='bool', default=False),
        critical=dict(type='bool', default=False),
    ),
    'mesa': _spec(
        COMMON, CLASSIFYING,
        n=dict(type='int', required=True),
        m=dict(type='int', required=True),
        kappa=dict(type='float', required=True),
        eps2=dict(type='float', required=True),
        branch=dict(type='list', elements='str'),
    ),
    'simulate': _spec(
        COMMON, DIFFUSION,
        n=dict(type='int', required=True),
        initial=dict(type='str', default='spikes', choices=['spikes', 'exact', 'mesa', 'file']),
        spikes=dict(type='int', aliases=['K']),
        d=dict(type='float'),
        dv=dict(type='float', aliases=['Dv', 'D_v']),
        positions=dict(type='list', elements='float'),
        solution=dict(type='int', default=0),
        m=dict(type='int', default=1),
        kappa=dict(type='float'),
        eps2=dict(type='float'),
        branch=dict(type='list', elements='str'),
        state_file=dict(type='path'),
        dt=dict(type='float', default=1e-3),
        t_end=dict(type='float', default=200.0),
        mode=dict(type='str', default='imex', choices=['explicit', 'imex', 'dae']),
        sample_every=dict(type='int', default=100),
        perturb_amp=dict(type='float', default=1e-3),
        perturb_mode=dict(type='int'),
        classify=dict(type='bool', default=False),
    ),
    'continue': _spec(
        COMMON, CLASSIFYING, DIFFUSION,
        n=dict(type='int', default=60),
        start=dict(type='str', default='asymmetric',
                   choices=['single', 'symmetric', 'asymmetric', 'three_asymmetric', 'mesa']),
        spikes=dict(type='int', default=2, aliases=['K']),
        separation=dict(type='float', default=0.5, aliases=['l']),
        parameter=dict(type='str', default='d', choices=['d', 'kappa', 'Dv']),
        range=dict(type='list', elements='float', required=True),
        step0=dict(type='float', default=0.01),
        m=dict(type='int', default=1),
        eps2=dict(type='float'),
        save_states=dict(type='bool', default=True),
    ),
    'sweep': _spec(
        COMMON,
        kind=dict(type='str', required=True, choices=['critical_dv', 'fold_kappa', 'fold_scan']),
        n=dict(type='int', required=True),
        spike_counts=dict(type='list', elements='int', aliases=['Ks']),
        eps2_grid=dict(type='list', elements='float'),
        du_grid=dict(type='list', elements='float'),
        m=dict(type='int', default=1),
        kappa_start=dict(type='float', default=6.0),
        kappa_end=dict(type='float', default=3.0),
        step0=dict(type='float', default=0.05),
    ),
}


def _require(params, *keys):
    missing = [k for k in keys if params.get(k) is None]
    if missing:
        raise InvalidInputError("Failed to validate parameters: missing {}".format(', '.join(missing)))


def _positions(params):
    if params.get('positions'):
        return np.asarray(params['positions'], dtype=float)
    _require(params, 'spikes')
    return even_positions(params['spikes'])


def _refined(config, lattice_params):
    return newton_refine(assemble_profile(config, lattice_params.n), lattice_params)


def construct(params, run_dir):
    n, d = params['n'], params['d']
    configs = solve_heights(_positions(params), d, threads=params['threads'])
    if not configs:
        raise NonexistenceError("Failed to construct spikes: no positive height solution at d={}".format(d))
    run_dir.write_json('configurations.json', [c.to_dict() for c in configs])
    out = dict(count=len(configs), configurations=[c.to_dict() for c in configs])
    if params['refine']:
        lattice_params = LatticeParams.from_d(n, d, du=params['du'], tau=params['tau'])
        residuals = []
        for i, config in enumerate(configs):
            refined = _refined(config, lattice_params)
            run_dir.write_state('states/{:03d}.csv'.format(i), refined.state)
            residuals.append(refined.residual_norm)
        out['lattice_residuals'] = residuals
    return out


def stability(params, run_dir):
    K, d, tol = params['spikes'], params['d'], params['marginal_tol']
    method = params['method']
    positions = _positions(params)
    if len(positions) != K:
        raise InvalidInputError("Failed to classify: {} positions given for K={}".format(len(positions), K))
    configs = solve_heights(positions, d, threads=params['threads'])
    if not configs:
        raise NonexistenceError("Failed to classify: no positive height solution at d={}".format(d))
    lattice_params = LatticeParams.from_d(params['n'], d, du=params['du'], tau=params['tau'])
    entries = []
    for i, config in enumerate(configs):
        entry = dict(index=i, configuration=config.to_dict())
        if method in ('reduced', 'both'):
            entry['reduced'] = reduced_spectrum(config, tol).to_dict()
        if method in ('lattice', 'both'):
            entry['lattice'] = lattice_spectrum(lattice_params, _refined(config, lattice_params).state, tol).to_dict()
        entries.append(entry)
    run_dir.write_json('stability.json', entries)
    out = dict(configurations=len(entries),
               classifications=[dict((k, e[k]['classification']) for k in ('reduced', 'lattice') if k in e)
                                for e in entries])
    if params['probe']:
        results = probe_trials(K, d, params['sigma'], params['trials'], seed=params['seed'],
                               threads=params['threads'], marginal_tol=tol)
        rows = [(i, spec.sigma, ';'.join(repr(s) for s in spec.s), sym, pert, pert > sym)
                for i, (spec, (sym, pert)) in enumerate(results)]
        run_dir.write_csv('probe.csv', ('trial', 'sigma', 'directions', 'max_real_symmetric',
                                        'max_real_perturbed', 'increased'), rows)
        out['probe'] = dict(trials=len(rows), all_increased=all(r[-1] for r in rows))
    if params['lattice_threshold']:
        out['d_c'] = symmetric_threshold(K)
        out['lattice_d_c'] = lattice_symmetric_threshold(params['n'], K, marginal_tol=tol)
    return out


def threshold(params, run_dir):
    K = params['spikes']
    d_c = symmetric_threshold(K)
    out = dict(K=K, d_c=d_c, d_c_rounded=float('{:.4g}'.format(d_c)))
    if params.get('separation') is not None:
        if K != 2:
            raise InvalidInputError("Failed to compute separation threshold: only defined for K=2, got K={}".format(K))
        out['separation'] = params['separation']
        out['d_c_separation'] = two_spike_threshold(params['separation'])
    if K == 3:
        out['asymmetric_limit'] = three_spike_asymmetric_limit()
    if params.get('n') is not None:
        out['n'] = params['n']
        out['lattice_d_c'] = lattice_symmetric_threshold(params['n'], K, marginal_tol=params['marginal_tol'])
    run_dir.write_json('threshold.json', out)
    return out


def exact(params, run_dir):
    n, K, dv, tol = params['n'], params['spikes'], params['dv'], params['marginal_tol']
    sol, state = exact_symmetric_solution(n, K, dv)
    lattice_params = LatticeParams(n=n, du=0.0, dv=dv, tau=params['tau'])
    report = exact_spectrum(sol, tol)
    run_dir.write_state('state.csv', state)
    run_dir.write_json('solution.json', sol.to_dict())
    run_dir.write_json('stability.json', report.to_dict())
    out = dict(C0=sol.C0, m=sol.m, classification=report.classification, max_real=report.max_real,
               residual_norm=float(np.max(np.abs(steady_residual(lattice_params, state)))))
    if params['dense']:
        dense = lattice_spectrum(lattice_params, state, tol)
        run_dir.write_json('dense_stability.json', dense.to_dict())
        out['dense_max_real'] = dense.max_real
        out['dense_classification'] = dense.classification
    if params['critical']:
        dvc = critical_Dv(n, K)
        out['critical_dv'] = dvc
        out['sqrt_dvc_over_m'] = float(np.sqrt(dvc) / sol.m)
    return out


def mesa(params, run_dir):
    profile, state = mesa_profile(params['n'], params['m'], params['kappa'], params['eps2'], params.get('branch'))
    lattice_params = profile.params()
    report = lattice_spectrum(lattice_params, state, params['marginal_tol'])
    run_dir.write_state('state.csv', state)
    run_dir.write_state('leading.csv', profile.leading_state())
    run_dir.write_csv('eta.csv', ('k', 'eta', 'branch'), eta_trace_rows(profile))
    run_dir.write_json('stability.json', report.to_dict())
    return dict(classification=report.classification, max_real=report.max_real,
                leading_max=float(np.max(mesa_leading_spectrum(profile))),
                residual_norm=float(np.max(np.abs(steady_residual(lattice_params, state)))))


def _dv(params):
    if params.get('dv') is not None:
        return params['dv']
    _require(params, 'd')
    return params['d'] ** 2 * params['n'] ** 2


def initial_state(params):
    '''(LatticeParams, LatticeState) the simulation starts from'''
    n, kind = params['n'], params['initial']
    if kind == 'spikes':
        _require(params, 'd')
        configs = solve_heights(_positions(params), params['d'], threads=params['threads'])
        if not params['solution'] < len(configs):
            raise NonexistenceError("Failed to build initial state: solution {} requested, {} found".format(
                params['solution'], len(configs)))
        lattice_params = LatticeParams.from_d(n, params['d'], du=params['du'], tau=params['tau'])
        return lattice_params, _refined(configs[params['solution']], lattice_params).state
    if kind == 'exact':
        _require(params, 'spikes', 'dv')
        _, state = exact_symmetric_solution(n, params['spikes'], params['dv'])
        return LatticeParams(n=n, du=params['du'], dv=params['dv'], tau=params['tau']), state
    if kind == 'mesa':
        _require(params, 'kappa', 'eps2')
        profile, state = mesa_profile(n, params['m'], params['kappa'], params['eps2'], params.get('branch'))
        return profile.params().replace(tau=params['tau']), state
    _require(params, 'state_file')
    state = LatticeState.read_csv(params['state_file'])
    if state.n != n:
        raise InvalidInputError("Failed to build initial state: {} holds {} nodes, n={}".format(
            params['state_file'], state.n, n))
    return LatticeParams(n=n, du=params['du'], dv=_dv(params), tau=params['tau']), state


def simulate(params, run_dir):
    lattice_params, state = initial_state(params)
    cfg = SimConfig(dt=params['dt'], t_end=params['t_end'], mode=params['mode'],
                    sample_every=params['sample_every'], seed=params['seed'], perturb_amp=params['perturb_amp'])
    if not cfg.perturb_amp > 0:
        start = state
    elif params['perturb_mode'] is not None:
        start = perturb_along(state, floquet_direction(state, params['perturb_mode']), cfg.perturb_amp)
    else:
        start = perturb(state, cfg.perturb_amp, cfg.seed)
    traj = integrate(lattice_params, start, cfg)
    run_dir.write_state('initial.csv', state)
    run_dir.write_csv('trajectory.csv', ('t', 'node', 'u', 'v'), trajectory_rows(traj))
    run_dir.write_csv('summary.csv', ('t', 'spike_count', 'max_u', 'residual_norm'), summary_rows(traj))
    run_dir.write_state('final.csv', traj.final)
    track = track_spikes(traj)
    out = dict(final_time=traj.times[-1], spike_count=track.counts[-1], split=track.split(),
               expanding=track.expanding(), max_u=traj.max_u[-1])
    if params['classify']:
        out['classification'] = classify_by_simulation(lattice_params, state, cfg)
    return out


def branch_start(params):
    '''(base LatticeParams, start state) at the first value of the range'''
    n, parameter = params['n'], params['parameter']
    p0 = params['range'][0]
    if parameter == 'd':
        dv0 = p0 * p0 * n * n
    elif parameter == 'kappa':
        du = params['eps2'] if params['start'] == 'mesa' else params['du']
        if du is None or not du > 0:
            raise InvalidInputError("Failed to start continuation in kappa: D_u (or eps2 for mesas) must be positive")
        dv0 = p0 * du
    else:
        dv0 = p0
    if params['start'] == 'mesa':
        _require(params, 'eps2')
        eps2 = params['eps2']
        _, state = mesa_profile(n, params['m'], dv0 / eps2, eps2)
        return mesa_params(n, dv0 / eps2, eps2), state

    base = LatticeParams(n=n, du=params['du'], dv=dv0, tau=params['tau'])
    d0 = base.d
    kind = params['start']
    if kind in ('single', 'symmetric'):
        K = 1 if kind == 'single' else params['spikes']
        _, state = symmetric_lattice_state(n, K, d0, du=params['du'], tau=params['tau'])
        return base, state
    if kind == 'asymmetric':
        found = two_spike_closed_form(params['separation'], d0)
    else:
        found = three_spike_even_closed_form(d0)
    if len(found) < 2:
        raise NonexistenceError("Failed to start continuation: no asymmetric {} solution at d={:.6g}".format(
            'two-spike' if kind == 'asymmetric' else 'three-spike', d0))
    return base, _refined(found[1], base).state


def continuation(params, run_dir):
    span = params['range']
    if len(span) != 2:
        raise InvalidInputError("Failed to continue: range needs exactly two values, got {}".format(span))
    base, state = branch_start(params)
    branch = continue_branch(base, state, params['parameter'], span, params['step0'], marginal_tol=params['marginal_tol'])
    run_dir.write_csv('branch.csv', ('param', 'max_u', 'stable', 'fold_flag'), branch_rows(branch))
    if params['save_states']:
        for i, point in enumerate(branch.points):
            run_dir.write_state('states/{:04d}.csv'.format(i), point.state)
    summary = dict(parameter=params['parameter'], points=len(branch.points), folds=branch.folds,
                   stability_changes=branch.stability_changes, diagnostics=branch.diagnostics)
    run_dir.write_json('branch.json', summary)
    return summary


SWEEP_HEADERS = {
    'critical_dv': ('n', 'K', 'm', 'Dvc', 'sqrtDvc_over_m'),
    'fold_kappa': ('eps2', 'n', 'm', 'kappa_f'),
    'fold_scan': ('du', 'kappa_f', 'connected'),
}


def _sweep_grid(params):
    kind, n = params['kind'], params['n']
    if kind == 'critical_dv':
        Ks = params.get('spike_counts') or [K for K in range(2, n + 1) if n % K == 0]
        return [int(K) for K in Ks]
    key = 'eps2_grid' if kind == 'fold_kappa' else 'du_grid'
    _require(params, key)
    grid = [float(x) for x in params[key]]
    if any(not x > 0 for x in grid):
        raise InvalidInputError("Failed to sweep: {} values must be positive".format(key))
    return grid


def _sweep_point(params, value):
    kind, n = params['kind'], params['n']
    if kind == 'critical_dv':
        dvc = critical_Dv(n, value)
        m = n // value
        return (n, value, m, dvc, float(np.sqrt(dvc) / m)), None
    if kind == 'fold_kappa':
        return (value, n, params['m'], fold_kappa(value, n, params['m'])), None
    point = fold_scan_point(value, n, params['kappa_start'], params['kappa_end'], params['step0'])
    if point.error is not None or point.kappa_f is None:
        return None, point
    return (point.du, point.kappa_f, point.connected), point


def sweep(params, run_dir):
    '''Append one CSV row per grid point; points already in the manifest are skipped'''
    kind = params['kind']
    grid = _sweep_grid(params)
    completed = list(run_dir.load_manifest().get('completed', []))
    pending = [x for x in grid if repr(x) not in completed]
    display.vv(u"Sweep {}: {} of {} points pending".format(kind, len(pending), len(grid)))

    def work(value):
        try:
            return value, _sweep_point(params, value), None
        except GMLatticeError as e:
            return value, (None, None), e

    threads = max(1, params['threads'])
    with ThreadPoolExecutor(max_workers=threads) as pool:
        outcomes = pool.map(work, pending)
        skipped = []
        scanned = []
        for value, (row, point), error in outcomes:
            if point is not None:
                scanned.append(point)
            if row is None:
                reason = str(error) if error is not None else (point.error or 'no fold found')
                display.warning(u"Skipping sweep point {}={}: {}".format(kind, value, reason))
                skipped.append(value)
                continue
            run_dir.append_csv('sweep.csv', SWEEP_HEADERS[kind], [row])
            completed.append(repr(value))
            run_dir.write_manifest(completed=completed)
    if kind == 'fold_scan':
        check_monotone(scanned)
    if 'sweep.csv' not in run_dir.artifacts and completed:
        run_dir.artifacts.append('sweep.csv')
    return dict(kind=kind, new_points=len(pending) - len(skipped), skipped=skipped, completed=completed,
                changed=len(pending) > len(skipped), _manifest=dict(completed=completed))


HANDLERS = {
    'construct': construct,
    'stability': stability,
    'threshold': threshold,
    'exact': exact,
    'mesa': mesa,
    'simulate': simulate,
    'continue': continuation,
    'sweep': sweep,
}


def resolve(subcommand, params):
    '''Canonical keys of the subcommand spec only, with schema defaults for unset keys; aliases are dropped'''
    if subcommand not in ARGUMENT_SPECS:
        raise InvalidInputError("Failed to run: unknown subcommand {}".format(subcommand))
    resolved = {}
    for key, option in ARGUMENT_SPECS[subcommand].items():
        value = params.get(key)
        resolved[key] = option.get('default') if value is None else value
    resolved['output_dir'] = resolved['output_dir'] or default_output_dir()
    return resolved


def plan(subcommand, params):
    params = resolve(subcommand, params)
    return RunDirectory(params['output_dir'], subcommand, params)


def execute(subcommand, params):
    params = resolve(subcommand, params)
    run_dir = RunDirectory(params['output_dir'], subcommand, params)
    display.vv(u"Running {} into {}".format(subcommand, run_dir.path))
    result = HANDLERS[subcommand](params, run_dir)
    extra = result.pop('_manifest', {})
    result.setdefault('changed', True)
    run_dir.write_manifest(**extra)
    result.update(run_dir=run_dir.path, config_hash=run_dir.hash, artifacts=sorted(run_dir.artifacts))
    return result
