#!/usr/bin/python
# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function
__metaclass__ = type
DOCUMENTATION = r'''
---
module: gm_simulate
short_description: Time-step the lattice system from a steady or stored state
description:
  - Builds an initial state from reduced spikes, the exact symmetric solution, a mesa or a state CSV.
  - Adds seeded mean-zero activator noise and integrates with the explicit, IMEX or slaved-inhibitor (dae) scheme.
  - Writes trajectory.csv (t,node,u,v), summary.csv (t,spike_count,max_u,residual_norm) and the initial and final states.
  - With I(classify), also labels the initial state stable, unstable or inconclusive from the growth of the perturbation.
version_added: "1.0.0"
author: Crystian @Crystian0704
options:
  n:
    description:
      - Number of lattice nodes.
    required: true
    type: int
  initial:
    description:
      - Where the initial state comes from.
    required: false
    type: str
    default: spikes
    choices: [ spikes, exact, mesa, file ]
  spikes:
    description:
      - Number of spikes for C(spikes) and C(exact).
    required: false
    type: int
    aliases: [ K ]
  d:
    description:
      - Scaled inhibitor diffusion for C(spikes), or in place of I(dv) for C(file).
    required: false
    type: float
  dv:
    description:
      - Inhibitor diffusion D_v for C(exact) and C(file).
    required: false
    type: float
    aliases: [ Dv, D_v ]
  positions:
    description:
      - Spike positions for C(spikes). Defaults to evenly spaced.
    required: false
    type: list
    elements: float
  solution:
    description:
      - Index into the sorted list of reduced height solutions for C(spikes).
    required: false
    type: int
    default: 0
  m:
    description:
      - Plateau width for C(mesa).
    required: false
    type: int
    default: 1
  kappa:
    description:
      - Ratio D_v / D_u for C(mesa).
    required: false
    type: float
  eps2:
    description:
      - Activator diffusion for C(mesa).
    required: false
    type: float
  branch:
    description:
      - Tail recursion signs for C(mesa).
    required: false
    type: list
    elements: str
  state_file:
    description:
      - Lattice state CSV (node,u,v) for C(file).
    required: false
    type: path
  du:
    description:
      - Activator diffusion D_u.
    required: false
    type: float
    default: 0.0
    aliases: [ Du, D_u ]
  tau:
    description:
      - Inhibitor time constant. C(dae) requires 0.
    required: false
    type: float
    default: 0.0
  dt:
    description:
      - Time step.
    required: false
    type: float
    default: 1.0e-3
  t_end:
    description:
      - Final time.
    required: false
    type: float
    default: 200.0
  mode:
    description:
      - Time-stepping scheme.
    required: false
    type: str
    default: imex
    choices: [ explicit, imex, dae ]
  sample_every:
    description:
      - Record every this many steps.
    required: false
    type: int
    default: 100
  perturb_amp:
    description:
      - Relative size of the initial activator noise. 0 integrates the state unperturbed.
    required: false
    type: float
    default: 1.0e-3
  perturb_mode:
    description:
      - Shape the initial perturbation as Floquet mode j, cos(2 pi j k / K) over the K spikes in node order, instead of noise.
    required: false
    type: int
  classify:
    description:
      - Also classify the initial state by simulation.
    required: false
    type: bool
    default: false
  output_dir:
    description:
      - Root directory for run outputs.
      - Defaults to the GM_LATTICE_OUTPUT_DIR environment variable, then ./gm_output.
    required: false
    type: path
  seed:
    description:
      - Seed of the initial noise.
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
- name: Symmetric pair below threshold
  crystian.gm_lattice.gm_simulate:
    n: 60
    K: 2
    d: 0.25
    dt: 0.01
    t_end: 100
    classify: true
  register: pair

- name: Continue a stored state
  crystian.gm_lattice.gm_simulate:
    n: 60
    initial: file
    state_file: /tmp/state.csv
    d: 0.3
'''
RETURN = r'''
final_time:
  description: Time of the last recorded sample.
  type: float
  returned: success
spike_count:
  description: Number of spike clusters in the final state.
  type: int
  returned: success
split:
  description: Whether the cluster count ever increased.
  type: bool
  returned: success
expanding:
  description: Whether the set of high nodes grew without shrinking.
  type: bool
  returned: success
max_u:
  description: Largest activator value at the end.
  type: float
  returned: success
classification:
  description: stable, unstable or inconclusive.
  type: str
  returned: when classify is true
run_dir:
  description: Directory holding the CSV outputs and manifest.json.
  type: str
  returned: success
'''
from ansible.module_utils.basic import AnsibleModule
from ansible_collections.crystian.gm_lattice.plugins.module_utils.commands import ARGUMENT_SPECS, execute, plan
from ansible_collections.crystian.gm_lattice.plugins.module_utils.errors import GMLatticeError


def main():
    module = AnsibleModule(argument_spec=ARGUMENT_SPECS['simulate'], supports_check_mode=True)
    if module.check_mode:
        run_dir = plan('simulate', module.params)
        module.exit_json(changed=False, msg="Would write into {}".format(run_dir.path), run_dir=run_dir.path)
    try:
        result = execute('simulate', module.params)
    except GMLatticeError as e:
        module.fail_json(**e.to_dict())
    module.exit_json(**result)


if __name__ == '__main__':
    main()
