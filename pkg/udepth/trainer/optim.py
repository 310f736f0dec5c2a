# Copyright (C) 2026 The udepth authors. All rights reserved.
#
# This file is part of udepth.
#
# udepth is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 2 of the License, or
# (at your option) any later version.
#
# udepth is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with udepth.  If not, see <http://www.gnu.org/licenses/>.
'''
ADAM optimiser with bias-corrected moments.
'''
from collections import OrderedDict
import numpy as np
from udepth.core import InvalidArgument, kassert


class OptimState(object):
    '''
    Per-parameter first and second moment accumulators and the step count.
    '''

    def __init__(self, params, lr=1e-4, beta1=0.9, beta2=0.999, eps=1e-8, weight_decay=0.0):
        '''
        :param params: OrderedDict name -> array, gives the moment shapes
        :param lr: learning rate (> 0)
        :param beta1: decay rate of the first moment
        :param beta2: decay rate of the second moment
        :param eps: denominator offset
        :param weight_decay: L2 coefficient added to the gradients (default: 0)
        '''
        kassert.positive(lr, 'lr')
        kassert.in_range(beta1, 0.0, 1.0, 'beta1')
        kassert.in_range(beta2, 0.0, 1.0, 'beta2')
        kassert.positive(eps, 'eps')
        self.lr = float(lr)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.eps = float(eps)
        self.weight_decay = float(weight_decay)
        self.step = 0
        self.m = OrderedDict((name, np.zeros(np.shape(value))) for name, value in params.items())
        self.v = OrderedDict((name, np.zeros(np.shape(value))) for name, value in params.items())


def adam_step(state, params, grads, lr=None):
    '''
    One ADAM update::

        m <- beta1 m + (1 - beta1) g
        v <- beta2 v + (1 - beta2) g^2
        theta <- theta - lr m_hat / (sqrt(v_hat) + eps)

    The moments of ``state`` are updated in place.

    :type state: :class:`OptimState`
    :param params: OrderedDict name -> array
    :param grads: mapping name -> gradient array
    :param lr: learning rate of this step (default: state.lr)
    :return: OrderedDict of the updated parameters (new arrays)
    '''
    if list(params) != list(state.m):
        raise InvalidArgument('parameter names do not match the optimiser state')
    lr = state.lr if lr is None else float(lr)
    state.step += 1
    bc1 = 1.0 - state.beta1 ** state.step
    bc2 = 1.0 - state.beta2 ** state.step
    updated = OrderedDict()
    for name, value in params.items():
        grad = np.asarray(grads[name], dtype=np.float64)
        if grad.shape != np.shape(value):
            raise InvalidArgument('gradient of %s has shape %s, expected %s' % (name, grad.shape, np.shape(value)))
        if state.weight_decay:
            grad = grad + state.weight_decay * value
        m = state.m[name]
        v = state.v[name]
        m *= state.beta1
        m += (1.0 - state.beta1) * grad
        v *= state.beta2
        v += (1.0 - state.beta2) * (grad * grad)
        updated[name] = value - lr * (m / bc1) / (np.sqrt(v / bc2) + state.eps)
    return updated
