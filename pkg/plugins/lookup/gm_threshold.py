#!/usr/bin/python
# -*- coding: utf-8 -*-

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

DOCUMENTATION = r"""
  name: gm_threshold
  author: Crystian @Crystian0704
  version_added: "1.0.0"
  short_description: Closed-form stability thresholds of spike patterns
  description:
      - Returns d_c(K) for every spike count K given as a term.
      - With separation, returns the threshold of an equal-height spike pair at that separation instead; terms must then be 2.
  options:
    separation:
      description:
        - Pair separation l in (0, 1/2].
      required: False
      type: float
"""

EXAMPLES = r"""
- name: Thresholds of two and three spikes
  debug:
    msg: "{{ lookup('crystian.gm_lattice.gm_threshold', 2, 3) }}"

- name: Threshold of a pair at separation 0.4
  debug:
    msg: "{{ lookup('crystian.gm_lattice.gm_threshold', 2, separation=0.4) }}"
"""

RETURN = r"""
  _raw:
    description: One threshold d per term
    type: list
    elements: float
"""

from ansible.errors import AnsibleError
from ansible.plugins.lookup import LookupBase
from ansible.utils.display import Display

from ansible_collections.crystian.gm_lattice.plugins.module_utils.errors import GMLatticeError
from ansible_collections.crystian.gm_lattice.plugins.module_utils.reduced_stability import (
    symmetric_threshold,
    two_spike_threshold,
)

display = Display()


class LookupModule(LookupBase):

    def _threshold(self, term, separation):
        try:
            K = int(term)
        except (TypeError, ValueError):
            raise AnsibleError("Failed to lookup threshold: spike count must be an integer, got {!r}".format(term))
        if separation is None:
            return symmetric_threshold(K)
        if K != 2:
            raise AnsibleError("Failed to lookup threshold: separation is only defined for K=2, got K={}".format(K))
        return two_spike_threshold(float(separation))

    def run(self, terms, variables=None, **kwargs):
        self.set_options(var_options=variables, direct=kwargs)

        separation = self.get_option('separation')

        ret = []

        for term in terms:
            try:
                d = self._threshold(term, separation)
            except GMLatticeError as e:
                raise AnsibleError("Failed to lookup threshold for {}: {}".format(term, e))
            display.vv(u"Threshold for K={}: {}".format(term, d))
            ret.append(d)

        return ret
