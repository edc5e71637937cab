#!/usr/bin/python
# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function
__metaclass__ = type
DOCUMENTATION = r'''
---
module: gm_stability
short_description: Classify spike configurations as stable, unstable or marginal
description:
  - Solves the reduced heights at the given positions and classifies every solution.
  - C(reduced) uses the K x K problem I - M, C(lattice) the full generalized eigenproblem at the refined lattice state.
  - With I(probe), runs seeded position perturbations near d_c(K) and checks that each one raises the leading eigenvalue.
  - With I(lattice_threshold), also returns the finite-n threshold next to the closed form.
version_added: "1.0.0"
author: Crystian @Crystian0704
options:
  n:
    description:
      - Number of lattice nodes for the lattice method and the lattice threshold.
    required: false
    type: int
    default: 60
  spikes:
    description:
      - Number of spikes K.
    required: true
    type: int
    aliases: [ K ]
  d:
    description:
      - Scaled inhibitor diffusion d = sqrt(D_v)/n.
    required: true
    type: float
  positions:
    description:
      - Spike positions in [0, 1). Defaults to K evenly spaced positions.
    required: false
    type: list
    elements: float
  method:
    description:
      - Which spectrum to compute.
    required: false
    type: str
    default: reduced
    choices: [ reduced, lattice, both ]
  du:
    description:
      - Activator diffusion D_u for the lattice method.
    required: false
    type: float
    default: 0.0
    aliases: [ Du, D_u ]
  tau:
    description:
      - Inhibitor time constant for the lattice method.
    required: false
    type: float
    default: 0.0
  probe:
    description:
      - Run the local optimality probe. d must lie within 2% of d_c(K).
    required: false
    type: bool
    default: false
  sigma:
    description:
      - Perturbation size of the probe.
    required: false
    type: float
    default: 0.005
  trials:
    description:
      - Number of probe directions.
    required: false
    type: int
    default: 20
  lattice_threshold:
    description:
      - Also compute the finite-n threshold of the symmetric state.
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
      - Seed of the probe directions.
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
- name: Symmetric pair just below threshold
  crystian.gm_lattice.gm_stability:
    K: 2
    d: 0.25
    method: both

- name: Probe local optimality at d_c(3)
  crystian.gm_lattice.gm_stability:
    K: 3
    d: 0.2127
    probe: true
    trials: 20
    seed: 7
  register: probe
'''
RETURN = r'''
configurations:
  description: Number of height solutions classified.
  type: int
  returned: success
classifications:
  description: Per solution, the classification from each requested method.
  type: list
  elements: dict
  returned: success
probe:
  description: Number of trials and whether every perturbation raised the leading eigenvalue.
  type: dict
  returned: when probe is true
lattice_d_c:
  description: Finite-n threshold of the symmetric state.
  type: float
  returned: when lattice_threshold is true
run_dir:
  description: Directory holding stability.json, probe.csv and manifest.json.
  type: str
  returned: success
'''
from ansible.module_utils.basic import AnsibleModule
from ansible_collections.crystian.gm_lattice.plugins.module_utils.commands import ARGUMENT_SPECS, execute, plan
from ansible_collections.crystian.gm_lattice.plugins.module_utils.errors import GMLatticeError


def main():
    module = AnsibleModule(argument_spec=ARGUMENT_SPECS['stability'], supports_check_mode=True)
    if module.check_mode:
        run_dir = plan('stability', module.params)
        module.exit_json(changed=False, msg="Would write into {}".format(run_dir.path), run_dir=run_dir.path)
    try:
        result = execute('stability', module.params)
    except GMLatticeError as e:
        module.fail_json(**e.to_dict())
    module.exit_json(**result)


if __name__ == '__main__':
    main()
