#!/usr/bin/python
# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function
__metaclass__ = type
DOCUMENTATION = r'''
---
module: gm_sweep
short_description: Resumable parameter sweeps
description:
  - C(critical_dv) computes the critical D_v of the exact symmetric state for each spike count K dividing n.
  - C(fold_kappa) locates the kappa below which the m-mesa stops existing, for each eps2.
  - C(fold_scan) follows the one-spike branch downward in kappa for each D_u and records its fold.
  - Rows are appended to sweep.csv and each finished point is recorded in manifest.json, so a rerun only computes missing points.
version_added: "1.0.0"
author: Crystian @Crystian0704
options:
  kind:
    description:
      - Which sweep to run.
    required: true
    type: str
    choices: [ critical_dv, fold_kappa, fold_scan ]
  n:
    description:
      - Number of lattice nodes.
    required: true
    type: int
  spike_counts:
    description:
      - Spike counts for C(critical_dv). Defaults to every divisor K >= 2 of n.
    required: false
    type: list
    elements: int
    aliases: [ Ks ]
  eps2_grid:
    description:
      - Activator diffusions for C(fold_kappa).
    required: false
    type: list
    elements: float
  du_grid:
    description:
      - Activator diffusions for C(fold_scan).
    required: false
    type: list
    elements: float
  m:
    description:
      - Plateau width for C(fold_kappa).
    required: false
    type: int
    default: 1
  kappa_start:
    description:
      - Starting kappa of the C(fold_scan) branches.
    required: false
    type: float
    default: 6.0
  kappa_end:
    description:
      - Lowest kappa of the C(fold_scan) branches.
    required: false
    type: float
    default: 3.0
  step0:
    description:
      - Initial arclength step of the C(fold_scan) branches.
    required: false
    type: float
    default: 0.05
  output_dir:
    description:
      - Root directory for run outputs.
      - Defaults to the GM_LATTICE_OUTPUT_DIR environment variable, then ./gm_output.
    required: false
    type: path
  seed:
    description:
      - Random seed.
    required: false
    type: int
    default: 0
  threads:
    description:
      - Number of grid points computed concurrently.
    required: false
    type: int
    default: 1
'''
EXAMPLES = r'''
- name: Critical D_v for every spike count on 60 nodes
  crystian.gm_lattice.gm_sweep:
    kind: critical_dv
    n: 60
    threads: 4

- name: Fold curve of the one-spike branch
  crystian.gm_lattice.gm_sweep:
    kind: fold_scan
    n: 120
    du_grid: [0.0005, 0.001, 0.002, 0.004]
'''
RETURN = r'''
kind:
  description: Sweep kind.
  type: str
  returned: success
new_points:
  description: Points computed in this run.
  type: int
  returned: success
skipped:
  description: Grid values that failed and were left for a rerun.
  type: list
  returned: success
completed:
  description: Grid values recorded in the manifest so far.
  type: list
  elements: str
  returned: success
run_dir:
  description: Directory holding sweep.csv and manifest.json.
  type: str
  returned: success
'''
from ansible.module_utils.basic import AnsibleModule
from ansible_collections.crystian.gm_lattice.plugins.module_utils.commands import ARGUMENT_SPECS, execute, plan
from ansible_collections.crystian.gm_lattice.plugins.module_utils.errors import GMLatticeError


def main():
    module = AnsibleModule(argument_spec=ARGUMENT_SPECS['sweep'], supports_check_mode=True)
    if module.check_mode:
        run_dir = plan('sweep', module.params)
        module.exit_json(changed=False, msg="Would write into {}".format(run_dir.path), run_dir=run_dir.path)
    try:
        result = execute('sweep', module.params)
    except GMLatticeError as e:
        module.fail_json(**e.to_dict())
    module.exit_json(**result)


if __name__ == '__main__':
    main()
