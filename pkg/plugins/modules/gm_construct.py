#!/usr/bin/python
# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function
__metaclass__ = type
DOCUMENTATION = r'''
---
module: gm_construct
short_description: Build spike configurations on the ring and the lattice
description:
  - Solves the reduced height equations V_k = sum_j V_j^2 G(x_k, x_j) from a multistart set of guesses.
  - Every distinct positive solution is written to configurations.json.
  - With I(refine), each solution is assembled on the n-node lattice and polished by Newton; the states go to states/NNN.csv.
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
      - Number of evenly spaced spikes. Required unless I(positions) is given.
    required: false
    type: int
    aliases: [ K ]
  d:
    description:
      - Scaled inhibitor diffusion d = sqrt(D_v)/n.
    required: true
    type: float
  positions:
    description:
      - Spike positions in [0, 1), strictly increasing. Must be on the lattice grid when refining.
    required: false
    type: list
    elements: float
  du:
    description:
      - Activator diffusion D_u.
    required: false
    type: float
    default: 0.0
    aliases: [ Du, D_u ]
  tau:
    description:
      - Inhibitor time constant.
    required: false
    type: float
    default: 0.0
  refine:
    description:
      - Assemble and refine every solution on the lattice.
    required: false
    type: bool
    default: true
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
      - Upper bound on worker threads for the multistart.
    required: false
    type: int
    default: 1
'''
EXAMPLES = r'''
- name: All two-spike solutions at d=0.2 on 60 nodes
  crystian.gm_lattice.gm_construct:
    n: 60
    K: 2
    d: 0.2
  register: pair

- name: Reduced solutions only, at uneven positions
  crystian.gm_lattice.gm_construct:
    n: 60
    d: 0.25
    positions: [0.0, 0.4]
    refine: false
'''
RETURN = r'''
count:
  description: Number of distinct positive solutions.
  type: int
  returned: success
configurations:
  description: Each solution with keys K, d, positions, heights, residual_norm.
  type: list
  elements: dict
  returned: success
lattice_residuals:
  description: Lattice residual of each refined state.
  type: list
  elements: float
  returned: when refine is true
run_dir:
  description: Directory holding the outputs and manifest.json.
  type: str
  returned: success
'''
from ansible.module_utils.basic import AnsibleModule
from ansible_collections.crystian.gm_lattice.plugins.module_utils.commands import ARGUMENT_SPECS, execute, plan
from ansible_collections.crystian.gm_lattice.plugins.module_utils.errors import GMLatticeError


def main():
    module = AnsibleModule(argument_spec=ARGUMENT_SPECS['construct'], supports_check_mode=True)
    if module.check_mode:
        run_dir = plan('construct', module.params)
        module.exit_json(changed=False, msg="Would write into {}".format(run_dir.path), run_dir=run_dir.path)
    try:
        result = execute('construct', module.params)
    except GMLatticeError as e:
        module.fail_json(**e.to_dict())
    module.exit_json(**result)


if __name__ == '__main__':
    main()
