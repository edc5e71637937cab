#!/usr/bin/python
# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function
__metaclass__ = type
DOCUMENTATION = r'''
---
module: gm_threshold
short_description: Stability thresholds of evenly spaced spike patterns
description:
  - Returns the closed-form threshold d_c(K) of the symmetric K-spike pattern on the unit ring.
  - With I(separation), also the threshold of an equal-height spike pair at that separation.
  - With I(n), also the finite-lattice threshold found by bisection on the full pencil spectrum.
  - For K=3 the largest d at which the two-height three-spike solutions exist is reported too.
version_added: "1.0.0"
author: Crystian @Crystian0704
options:
  spikes:
    description:
      - Number of spikes K.
    required: true
    type: int
    aliases: [ K ]
  separation:
    description:
      - Separation l in (0, 1/2] of a two-spike pair. Only valid with K=2.
    required: false
    type: float
    aliases: [ l ]
  n:
    description:
      - Lattice size for the finite-n threshold. Must be divisible by K.
    required: false
    type: int
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
- name: Two-spike threshold
  crystian.gm_lattice.gm_threshold:
    K: 2
  register: two_spike

- name: Threshold of a pair at separation 0.4 and on a 60-node lattice
  crystian.gm_lattice.gm_threshold:
    K: 2
    separation: 0.4
    n: 60
'''
RETURN = r'''
d_c:
  description: Closed-form threshold d_c(K).
  type: float
  returned: always
d_c_rounded:
  description: d_c to 4 significant digits.
  type: float
  returned: always
d_c_separation:
  description: Threshold of the equal-height pair at the given separation.
  type: float
  returned: when separation is set
lattice_d_c:
  description: Threshold of the symmetric state on n nodes.
  type: float
  returned: when n is set
asymmetric_limit:
  description: Largest d with asymmetric even three-spike solutions.
  type: float
  returned: when K is 3
run_dir:
  description: Directory holding threshold.json and manifest.json.
  type: str
  returned: success
'''
from ansible.module_utils.basic import AnsibleModule
from ansible_collections.crystian.gm_lattice.plugins.module_utils.commands import ARGUMENT_SPECS, execute, plan
from ansible_collections.crystian.gm_lattice.plugins.module_utils.errors import GMLatticeError


def main():
    module = AnsibleModule(argument_spec=ARGUMENT_SPECS['threshold'], supports_check_mode=True)
    if module.check_mode:
        run_dir = plan('threshold', module.params)
        module.exit_json(changed=False, msg="Would write into {}".format(run_dir.path), run_dir=run_dir.path)
    try:
        result = execute('threshold', module.params)
    except GMLatticeError as e:
        module.fail_json(**e.to_dict())
    module.exit_json(**result)


if __name__ == '__main__':
    main()
