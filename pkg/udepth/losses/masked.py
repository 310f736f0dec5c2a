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
Masked loss values and the shared reduction helpers.

Every loss is averaged over the N valid ground-truth pixels (mask loss),
never over H x W. Reductions use :func:`math.fsum`, which is exactly
rounded, so values do not depend on summation order or thread count.
Masked-out pixels are never read: changing their values leaves a loss
bit-identical.
'''
import math
import numpy as np
from udepth.core import InvalidArgument, UndefinedLoss, kassert


class MaskedLossValue(object):
    '''
    Value and analytic per-pixel gradients of a masked loss.
    '''

    def __init__(self, value, n_valid, grad_pred, grad_s=None, family=''):
        '''
        :param value: loss value
        :param n_valid: number of pixels the loss was averaged over
        :param grad_pred: gradient with respect to the predicted map
        :param grad_s: gradient with respect to the log-variance map (None when s is not trained)
        :param family: name of the loss that produced the value
        '''
        self.value = float(value)
        self.n_valid = int(n_valid)
        self.grad_pred = grad_pred
        self.grad_s = grad_s
        self.family = family

    def scaled(self, weight):
        '''
        :return: a copy with value and gradients multiplied by weight
        '''
        return MaskedLossValue(
            weight * self.value, self.n_valid, weight * self.grad_pred,
            None if self.grad_s is None else weight * self.grad_s, self.family)

    def __repr__(self):
        return 'MaskedLossValue(%s=%.6g, n=%d)' % (self.family or 'loss', self.value, self.n_valid)


def values_of(obj):
    '''
    :return: the array held by a grid (depth, log-variance, residual) or the array itself
    '''
    for attr in ('depth', 's', 'residual'):
        if hasattr(obj, attr):
            return np.asarray(getattr(obj, attr), dtype=np.float64)
    return np.asarray(obj, dtype=np.float64)


def mask_of(obj):
    '''
    :return: a boolean mask from a sparse grid (its validity) or an array
    '''
    if hasattr(obj, 'valid'):
        return np.asarray(obj.valid, dtype=bool)
    return np.asarray(obj, dtype=bool)


def prepare(mask, *arrays):
    '''
    Validate shapes and the mask.

    :return: (mask, n_valid, list of arrays)
    '''
    mask = mask_of(mask)
    arrays = [values_of(a) for a in arrays]
    kassert.same_shape(mask, *arrays)
    n_valid = int(np.count_nonzero(mask))
    if n_valid == 0:
        raise UndefinedLoss('loss over an empty mask')
    return mask, n_valid, arrays


def masked_mean(terms, n_valid):
    '''
    :param terms: per-pixel terms of the valid pixels (1-d)
    :param n_valid: normaliser N
    '''
    return math.fsum(terms.tolist()) / n_valid


def scatter(shape, mask, values):
    '''
    :return: array of ``shape`` holding ``values`` at the mask, zero elsewhere
    '''
    out = np.zeros(shape)
    out[mask] = values
    return out


class LossConfig(object):
    '''
    Loss configuration of the multiscale joint prediction step.
    '''

    def __init__(self, jeffrey=True, scale_weights=(1.0,), epoch_balanced=False):
        '''
        :param jeffrey: use the Jeffrey's prior regulariser coefficient 2 (1 when off)
        :param scale_weights: omega_k, indexed by scale k (finest first), all positive
        :param epoch_balanced: use the epoch-dependent balanced residual loss
        '''
        self.jeffrey = bool(jeffrey)
        self.scale_weights = tuple(float(w) for w in scale_weights)
        if not self.scale_weights:
            raise InvalidArgument('at least one scale weight is needed')
        for weight in self.scale_weights:
            kassert.positive(weight, 'scale weight')
        self.epoch_balanced = bool(epoch_balanced)

    @classmethod
    def default(cls, levels, jeffrey=True, epoch_balanced=False):
        '''
        :return: a configuration with omega_k = 2^-k
        '''
        return cls(jeffrey, [2.0 ** -k for k in range(levels)], epoch_balanced)

    @property
    def regularizer(self):
        '''
        :return: coefficient of the log-variance regulariser (2 with the prior, 1 without)
        '''
        return 2.0 if self.jeffrey else 1.0

    @property
    def levels(self):
        return len(self.scale_weights)
