# -*- coding: utf-8 -*-

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import json
import os

import numpy as np
import pytest

from plugins.module_utils.artifacts import (
    MANIFEST,
    OUTPUT_ENV,
    RunDirectory,
    canonical_json,
    cell,
    config_hash,
    default_output_dir,
)
from plugins.module_utils.lattice import LatticeState


def test_hash_ignores_output_dir_and_threads():
    a = config_hash('exact', dict(n=60, dv=1.0, output_dir='/tmp/a', threads=1))
    b = config_hash('exact', dict(dv=1.0, n=60, output_dir='/tmp/b', threads=8))
    assert a == b
    assert a != config_hash('exact', dict(n=60, dv=2.0))
    assert a != config_hash('mesa', dict(n=60, dv=1.0))
    assert len(a) == 64


def test_canonical_json_handles_numpy():
    assert canonical_json(dict(b=np.float64(0.5), a=np.arange(2))) == '{"a":[0,1],"b":0.5}'


def test_cells():
    assert cell(True) == 'true'
    assert cell(np.bool_(False)) == 'false'
    assert cell(0.1) == '0.1'
    assert cell(np.float64(1e-300)) == '1e-300'
    assert cell(None) == ''
    assert cell(3) == '3'


def test_output_dir_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path))
    assert default_output_dir() == str(tmp_path)
    monkeypatch.delenv(OUTPUT_ENV)
    assert default_output_dir() == 'gm_output'


def test_run_directory_layout(tmp_path):
    run = RunDirectory(str(tmp_path), 'mesa', dict(n=49, threads=2))
    assert os.path.basename(run.path) == 'mesa-' + run.hash[:12]
    run.write_csv('eta.csv', ('k', 'eta', 'branch'), [(1, 1.0, ''), (2, 0.25, '-')])
    with open(os.path.join(run.path, 'eta.csv')) as f:
        assert f.read() == 'k,eta,branch\n1,1.0,\n2,0.25,-\n'
    run.write_state('states/000.csv', LatticeState([0.0, 1.0, 0.0], [1.0, 1.0, 1.0]))
    assert run.artifacts == ['eta.csv', 'states/000.csv']


def test_append_writes_header_once(tmp_path):
    run = RunDirectory(str(tmp_path), 'sweep', dict(kind='critical_dv'))
    run.append_csv('sweep.csv', ('a', 'b'), [(1, 0.5)])
    run.append_csv('sweep.csv', ('a', 'b'), [(2, 0.25)])
    with open(os.path.join(run.path, 'sweep.csv')) as f:
        assert f.read() == 'a,b\n1,0.5\n2,0.25\n'


def test_manifest(tmp_path):
    run = RunDirectory(str(tmp_path), 'threshold', dict(spikes=2))
    assert run.load_manifest() == {}
    run.write_json('threshold.json', dict(d_c=0.28))
    manifest = run.write_manifest(completed=['2'])
    assert not os.path.exists(os.path.join(run.path, MANIFEST + '.tmp'))
    with open(os.path.join(run.path, MANIFEST)) as f:
        stored = json.load(f)
    assert stored == manifest == run.load_manifest()
    assert stored['config_hash'] == run.hash
    assert stored['artifacts'] == ['threshold.json']
    assert stored['completed'] == ['2']
    assert set(stored['versions']) == {'crystian.gm_lattice', 'ansible-core', 'numpy', 'scipy'}


def test_broken_manifest(tmp_path):
    from plugins.module_utils.errors import InvalidInputError
    run = RunDirectory(str(tmp_path), 'sweep', dict(kind='fold_kappa'))
    os.makedirs(run.path)
    with open(os.path.join(run.path, MANIFEST), 'w') as f:
        f.write('{')
    with pytest.raises(InvalidInputError):
        run.load_manifest()
