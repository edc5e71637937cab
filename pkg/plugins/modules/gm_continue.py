#!/usr/bin/python
# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function
__metaclass__ = type
DOCUMENTATION = r'''
---
module: gm_continue
short_description: Follow a steady-state branch in d, kappa or D_v
description:
  - Seeds a lattice steady state from a closed-form spike solution or a mesa and follows it by pseudo-arclength continuation.
  - Folds are located where the parameter component of the tangent changes sign and refined by bisection.
  - Writes branch.csv (param,max_u,stable,fold_flag), branch.json and one state per point under states/.
version_added: "1.0.0"
author: Crystian @Crystian0704
options:
  n:
    description:
      - Number of lattice nodes.
    required: false
    type: int
    default: 60
  start:
    description:
      - Starting solution. C(asymmetric) is the unequal two-spike pair, C(three_asymmetric) the even three-spike state with one larger spike.
    required: false
    type: str
    default: asymmetric
    choices: [ single, symmetric, asymmetric, three_asymmetric, mesa ]
  spikes:
    description:
      - Number of spikes for C(symmetric).
    required: false
    type: int
    default: 2
    aliases: [ K ]
  separation:
    description:
      - Pair separation for C(asymmetric).
    required: false
    type: float
    default: 0.5
    aliases: [ l ]
  parameter:
    description:
      - Continuation parameter.
    required: false
    type: str
    default: d
    choices: [ d, kappa, Dv ]
  range:
    description:
      - Start and end value of the parameter. The branch stops when it leaves this interval.
    required: true
    type: list
    elements: float
  step0:
    description:
      - Initial arclength step.
    required: false
    type: float
    default: 0.01
  m:
    description:
      - Plateau width for C(mesa).
    required: false
    type: int
    default: 1
  eps2:
    description:
      - Activator diffusion for C(mesa).
    required: false
    type: float
  du:
    description:
      - Activator diffusion D_u for spike starts. Must be positive to continue spikes in kappa.
    required: false
    type: float
    default: 0.0
    aliases: [ Du, D_u ]
  tau:
    description:
      - Inhibitor time constant used in the stability flags.
    required: false
    type: float
    default: 0.0
  save_states:
    description:
      - Archive every branch point under states/.
    required: false
    type: bool
    default: true
  marginal_tol:
    description:
      - Tolerance on the leading real part below which a point is called marginal.
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
- name: Asymmetric two-spike branch through its fold
  crystian.gm_lattice.gm_continue:
    n: 60
    start: asymmetric
    range: [0.2, 0.35]
  register: branch

- name: One-spike branch downward in kappa
  crystian.gm_lattice.gm_continue:
    n: 120
    start: mesa
    eps2: 0.001
    parameter: kappa
    range: [6.0, 3.0]
    step0: 0.05
'''
RETURN = r'''
parameter:
  description: Continuation parameter name.
  type: str
  returned: success
points:
  description: Number of branch points, refined fold points included.
  type: int
  returned: success
folds:
  description: Parameter values of the detected folds, in branch order.
  type: list
  elements: float
  returned: success
stability_changes:
  description: Parameter values where the stability flag changes away from folds.
  type: list
  elements: float
  returned: success
diagnostics:
  description: Truncation and refinement messages.
  type: list
  elements: str
  returned: success
run_dir:
  description: Directory holding branch.csv, branch.json, states/ and manifest.json.
  type: str
  returned: success
'''
from ansible.module_utils.basic import AnsibleModule
from ansible_collections.crystian.gm_lattice.plugins.module_utils.commands import ARGUMENT_SPECS, execute, plan
from ansible_collections.crystian.gm_lattice.plugins.module_utils.errors import GMLatticeError


def main():
    module = AnsibleModule(argument_spec=ARGUMENT_SPECS['continue'], supports_check_mode=True)
    if module.check_mode:
        run_dir = plan('continue', module.params)
        module.exit_json(changed=False, msg="Would write into {}".format(run_dir.path), run_dir=run_dir.path)
    try:
        result = execute('continue', module.params)
    except GMLatticeError as e:
        module.fail_json(**e.to_dict())
    module.exit_json(**result)


if __name__ == '__main__':
    main()
