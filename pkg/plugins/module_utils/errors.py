# -*- coding: utf-8 -*-

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

from ansible.errors import AnsibleError


class GMLatticeError(AnsibleError):
    '''Base class for every failure raised by the collection'''

    exit_code = 1

    def __init__(self, message="", **details):
        super(GMLatticeError, self).__init__(message)
        self.details = details

    def to_dict(self):
        out = dict(msg=str(self), error=type(self).__name__)
        for key, value in self.details.items():
            if value is not None:
                out[key] = value
        return out


class InvalidInputError(GMLatticeError):
    exit_code = 2


class DomainError(GMLatticeError):
    '''A state left the region where u^2/v is defined'''

    def __init__(self, message="", node=None, **details):
        super(DomainError, self).__init__(message, node=node, **details)
        self.node = node


class NonexistenceError(GMLatticeError):
    '''The requested pattern does not exist at these parameters'''

    def __init__(self, message="", step=None, **details):
        super(NonexistenceError, self).__init__(message, step=step, **details)
        self.step = step


class ConvergenceError(GMLatticeError):

    def __init__(self, message="", iterations=None, residual=None, **details):
        super(ConvergenceError, self).__init__(message, iterations=iterations, residual=residual, **details)
        self.iterations = iterations
        self.residual = residual


class NumericalError(GMLatticeError):
    pass


class BlowUpError(GMLatticeError):

    def __init__(self, message="", time=None, node=None, **details):
        super(BlowUpError, self).__init__(message, time=time, node=node, **details)
        self.time = time
        self.node = node
