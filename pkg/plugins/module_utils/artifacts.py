# -*- coding: utf-8 -*-
"""Run directories, deterministic CSV/JSON writers and the run manifest."""

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import csv
import hashlib
import json
import os
import threading

import numpy as np
import scipy

from ansible.release import __version__ as ansible_version
from ansible.utils.display import Display

from .errors import InvalidInputError

display = Display()

COLLECTION_VERSION = '1.0.0'
OUTPUT_ENV = 'GM_LATTICE_OUTPUT_DIR'
DEFAULT_OUTPUT = 'gm_output'
HASH_EXCLUDED = ('output_dir', 'threads')
MANIFEST = 'manifest.json'


def default_output_dir():
    return os.environ.get(OUTPUT_ENV) or DEFAULT_OUTPUT


def _plain(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError("Object of type {} is not JSON serializable".format(type(obj).__name__))


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(',', ':'), default=_plain)


def config_hash(subcommand, params):
    hashed = dict((k, v) for k, v in params.items() if k not in HASH_EXCLUDED)
    payload = canonical_json(dict(subcommand=subcommand, params=hashed))
    return hashlib.sha256(payload.encode('utf-8')).hexdigest()


def versions():
    return {
        'crystian.gm_lattice': COLLECTION_VERSION,
        'ansible-core': ansible_version,
        'numpy': np.__version__,
        'scipy': scipy.__version__,
    }


def cell(value):
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return ''
    return str(value)


class RunDirectory(object):
    '''<root>/<subcommand>-<hash12>/ and the artifacts written into it'''

    def __init__(self, root, subcommand, params):
        self.subcommand = subcommand
        self.params = params
        self.hash = config_hash(subcommand, params)
        self.path = os.path.join(root or default_output_dir(), '{}-{}'.format(subcommand, self.hash[:12]))
        self.artifacts = []
        self._lock = threading.Lock()

    def file(self, name):
        target = os.path.join(self.path, name)
        parent = os.path.dirname(target)
        try:
            os.makedirs(parent, exist_ok=True)
        except OSError as e:
            raise InvalidInputError("Failed to create output directory {}: {}".format(parent, e))
        if name not in self.artifacts:
            self.artifacts.append(name)
        return target

    def write_csv(self, name, header, rows):
        with open(self.file(name), 'w', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                writer.writerow([cell(x) for x in row])
        display.vvv(u"Wrote {}".format(name))

    def append_csv(self, name, header, rows):
        '''Append rows, writing the header only when the file is new'''
        with self._lock:
            target = self.file(name)
            fresh = not os.path.exists(target) or os.path.getsize(target) == 0
            with open(target, 'a', newline='') as f:
                writer = csv.writer(f, lineterminator='\n')
                if fresh:
                    writer.writerow(header)
                for row in rows:
                    writer.writerow([cell(x) for x in row])

    def write_json(self, name, obj):
        with open(self.file(name), 'w') as f:
            json.dump(obj, f, indent=2, sort_keys=True, default=_plain)
            f.write('\n')
        display.vvv(u"Wrote {}".format(name))

    def write_state(self, name, state):
        self.write_csv(name, ('node', 'u', 'v'), state.csv_rows())

    def load_manifest(self):
        target = os.path.join(self.path, MANIFEST)
        if not os.path.exists(target):
            return {}
        try:
            with open(target) as f:
                return json.load(f)
        except ValueError as e:
            raise InvalidInputError("Failed to read manifest {}: {}".format(target, e))

    def write_manifest(self, **extra):
        with self._lock:
            manifest = dict(subcommand=self.subcommand, config=self.params, config_hash=self.hash,
                            artifacts=sorted(self.artifacts), versions=versions())
            manifest.update(extra)
            target = os.path.join(self.path, MANIFEST)
            os.makedirs(self.path, exist_ok=True)
            tmp = target + '.tmp'
            with open(tmp, 'w') as f:
                json.dump(manifest, f, indent=2, sort_keys=True, default=_plain)
                f.write('\n')
            os.replace(tmp, target)
        return manifest
