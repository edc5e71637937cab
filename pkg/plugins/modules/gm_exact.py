#!/usr/bin/python
# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function
__metaclass__ = type
DOCUMENTATION = r'''
---
module: gm_exact
short_description: Exact symmetric K-spike lattice state with D_u = 0
description:
  - Builds the exact discrete state with spikes every m = n/K nodes and its Floquet spectrum.
  - With I(dense), the spectrum is checked against the dense generalized eigenproblem of the full lattice.
  - With I(critical), also returns the critical D_v where the most unstable mode crosses zero.
version_added: "1.0.0"
author: Crystian @Crystian0704
options:
  n:
    description:
      - Number of lattice nodes.
    required: true
    type: int
  spikes:
    description:
      - Number of spikes K. Must divide n.
    required: true
    type: int
    aliases: [ K ]
  dv:
    description:
      - Inhibitor diffusion D_v.
    required: true
    type: float
    aliases: [ Dv, D_v ]
  tau:
    description:
      - Inhibitor time constant for the dense check.
    required: false
    type: float
    default: 0.0
  dense:
    description:
      - Also run the dense pencil eigensolve.
    required: false
    type: bool
    default: false
  critical:
    description:
      - Also compute the critical D_v.
    required: false
    type: bool
    default: false
  marginal_tol:
    description:
      - Tolerance on the leading real part below which a state is called marginal.
    required: false
    type: float
    default: 1.0e-8
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
      - Upper bound on worker threads.
    required: false
    type: int
    default: 1
'''
EXAMPLES = r'''
- name: Zigzag pattern on 60 nodes
  crystian.gm_lattice.gm_exact:
    n: 60
    K: 30
    Dv: 1
    dense: true
  register: zigzag

- name: Critical D_v of four spikes
  crystian.gm_lattice.gm_exact:
    n: 60
    K: 4
    Dv: 10
    critical: true
'''
RETURN = r'''
C0:
  description: Spike value u = v at the spike nodes.
  type: float
  returned: success
classification:
  description: stable, unstable or marginal from the exact mode eigenvalues.
  type: str
  returned: success
max_real:
  description: Leading eigenvalue of the exact spectrum.
  type: float
  returned: success
residual_norm:
  description: Max-norm lattice residual of the exact state.
  type: float
  returned: success
dense_max_real:
  description: Leading real part of the dense pencil spectrum.
  type: float
  returned: when dense is true
critical_dv:
  description: Critical D_v.
  type: float
  returned: when critical is true
sqrt_dvc_over_m:
  description: sqrt(critical D_v) / m.
  type: float
  returned: when critical is true
run_dir:
  description: Directory holding state.csv, solution.json, stability.json and manifest.json.
  type: str
  returned: success
'''
from ansible.module_utils.basic import AnsibleModule
from ansible_collections.crystian.gm_lattice.plugins.module_utils.commands import ARGUMENT_SPECS, execute, plan
from ansible_collections.crystian.gm_lattice.plugins.module_utils.errors import GMLatticeError


def main():
    module = AnsibleModule(argument_spec=ARGUMENT_SPECS['exact'], supports_check_mode=True)
    if module.check_mode:
        run_dir = plan('exact', module.params)
        module.exit_json(changed=False, msg="Would write into {}".format(run_dir.path), run_dir=run_dir.path)
    try:
        result = execute('exact', module.params)
    except GMLatticeError as e:
        module.fail_json(**e.to_dict())
    module.exit_json(**result)


if __name__ == '__main__':
    main()
