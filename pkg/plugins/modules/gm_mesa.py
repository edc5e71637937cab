#!/usr/bin/python
# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function
__metaclass__ = type
DOCUMENTATION = r'''
---
module: gm_mesa
short_description: Mesa patterns for small activator diffusion
description:
  - Builds the leading-order m-node mesa for D_u = eps2 and D_v = kappa eps2 from the tail recursion.
  - Refines it on the lattice by Newton and classifies it by the dense eigensolve.
  - Fails when kappa <= 4, where the stable tail recursion has no real solution.
version_added: "1.0.0"
author: Crystian @Crystian0704
options:
  n:
    description:
      - Number of lattice nodes.
    required: true
    type: int
  m:
    description:
      - Plateau width in nodes, 1 for a single spike.
    required: true
    type: int
  kappa:
    description:
      - Ratio D_v / D_u.
    required: true
    type: float
  eps2:
    description:
      - Activator diffusion D_u.
    required: true
    type: float
  branch:
    description:
      - One sign per tail recursion step, C(+) or C(-). Defaults to all minus.
    required: false
    type: list
    elements: str
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
- name: Ten-node mesa on 49 nodes
  crystian.gm_lattice.gm_mesa:
    n: 49
    m: 10
    kappa: 5
    eps2: 0.001
  register: mesa
'''
RETURN = r'''
classification:
  description: stable, unstable or marginal from the dense eigensolve.
  type: str
  returned: success
max_real:
  description: Leading real part of the spectrum.
  type: float
  returned: success
leading_max:
  description: Largest leading-order eigenvalue estimate over the nodes.
  type: float
  returned: success
residual_norm:
  description: Max-norm lattice residual of the refined state.
  type: float
  returned: success
run_dir:
  description: Directory holding state.csv, leading.csv, eta.csv, stability.json and manifest.json.
  type: str
  returned: success
'''
from ansible.module_utils.basic import AnsibleModule
from ansible_collections.crystian.gm_lattice.plugins.module_utils.commands import ARGUMENT_SPECS, execute, plan
from ansible_collections.crystian.gm_lattice.plugins.module_utils.errors import GMLatticeError


def main():
    module = AnsibleModule(argument_spec=ARGUMENT_SPECS['mesa'], supports_check_mode=True)
    if module.check_mode:
        run_dir = plan('mesa', module.params)
        module.exit_json(changed=False, msg="Would write into {}".format(run_dir.path), run_dir=run_dir.path)
    try:
        result = execute('mesa', module.params)
    except GMLatticeError as e:
        module.fail_json(**e.to_dict())
    module.exit_json(**result)


if __name__ == '__main__':
    main()
