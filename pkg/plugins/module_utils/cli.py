# -*- coding: utf-8 -*-
"""Command-line front end: gm_cli.py <subcommand> [--config FILE] [--option VALUE ...]

Values resolve as schema defaults, then the config file, then flags given on
the command line. Exit codes: 0 success, 1 numerical failure, 2 invalid input.
"""

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import argparse
import json
import sys

import yaml

from ansible.module_utils.common.arg_spec import ArgumentSpecValidator
from ansible.utils.display import Display

from .commands import ARGUMENT_SPECS, SUBCOMMANDS, SUMMARIES, execute
from .errors import GMLatticeError, InvalidInputError

display = Display()

EXIT_OK = 0
EXIT_INVALID = InvalidInputError.exit_code


def _help(key, option):
    parts = [option.get('type', 'str')]
    if option.get('elements'):
        parts[0] = 'list of {}'.format(option['elements'])
    if option.get('required'):
        parts.append('required')
    if option.get('default') is not None:
        parts.append('default {}'.format(option['default']))
    if option.get('choices'):
        parts.append('one of {}'.format(', '.join(str(c) for c in option['choices'])))
    return '; '.join(parts)


def build_parser():
    parser = argparse.ArgumentParser(prog='gm_cli.py', description='Spike and mesa patterns of the Gierer-Meinhardt '
                                     'system on a cycle lattice')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='repeat for more solver output')
    sub = parser.add_subparsers(dest='subcommand', metavar='SUBCOMMAND')
    sub.required = True
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=SUMMARIES[name], description=SUMMARIES[name],
                           epilog='Full schema: docs/gm_{}.md'.format(name))
        p.add_argument('--config', metavar='FILE', help='JSON or YAML file with option values')
        for key, option in ARGUMENT_SPECS[name].items():
            flags = ['--' + key] + ['--' + alias for alias in option.get('aliases', [])]
            kwargs = dict(dest=key, default=argparse.SUPPRESS, help=_help(key, option))
            if option.get('type') == 'list':
                kwargs['nargs'] = '+'
            p.add_argument(*flags, **kwargs)
    return parser


def load_config(path):
    try:
        with open(path) as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise InvalidInputError("Failed to read config {}: {}".format(path, e))
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise InvalidInputError("Failed to read config {}: top level must be a mapping".format(path))
    return data


def resolve_params(subcommand, config, flags):
    '''Merge config and flags, then validate against the subcommand schema'''
    spec = ARGUMENT_SPECS[subcommand]
    merged = dict(config)
    for key in spec:
        # a flag replaces the canonical key and any alias the config used for it
        if key in flags:
            for alias in spec[key].get('aliases', []):
                merged.pop(alias, None)
            merged[key] = flags[key]
    result = ArgumentSpecValidator(spec).validate(merged)
    if result.error_messages:
        raise InvalidInputError("Failed to validate {} parameters: {}".format(subcommand, '; '.join(result.error_messages)))
    return dict((k, result.validated_parameters.get(k)) for k in spec)


def run(argv):
    parser = build_parser()
    try:
        args = vars(parser.parse_args(argv))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INVALID
    display.verbosity = args.pop('verbose')
    subcommand = args.pop('subcommand')
    config_path = args.pop('config', None)
    try:
        config = load_config(config_path) if config_path else {}
        params = resolve_params(subcommand, config, args)
        result = execute(subcommand, params)
    except GMLatticeError as e:
        display.error(u"{}".format(e), wrap_text=False)
        return e.exit_code
    sys.stdout.write(json.dumps(result, sort_keys=True, default=str) + '\n')
    return EXIT_OK
