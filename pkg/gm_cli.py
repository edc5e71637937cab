#!/usr/bin/env python
# -*- coding: utf-8 -*-
# Copyright: (c) Crystian @Crystian0704
# MIT License
"""gm_cli.py <subcommand> [--config FILE] [--option VALUE ...]; see docs/gm_<subcommand>.md"""

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import sys

from plugins.module_utils.cli import run

if __name__ == '__main__':
    sys.exit(run(sys.argv[1:]))
