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
Losses of the uncertainty-attention residual refinement step.

The refinement network predicts a residual map R that corrects the
stage-one depth. Each pixel is weighted by w = e^(s1 / 2) (the stage-one
standard deviation), so pixels the first stage is unsure about get a
larger share of the loss. The weights are constants: no gradient reaches s1.
'''
import numpy as np
from udepth.core import InvalidArgument
from udepth.losses.masked import MaskedLossValue, prepare, masked_mean, scatter


def attention_weights(s1):
    '''
    :param s1: stage-one log-variance (array)
    :return: per-pixel weights e^(s1 / 2)
    '''
    return np.exp(0.5 * np.asarray(s1, dtype=np.float64))


def _targets(residual_pred, stage1_pred, gt, s1, mask):
    mask, n_valid, (residual, stage1, gt, s1) = prepare(mask, residual_pred, stage1_pred, gt, s1)
    diff = (gt[mask] - stage1[mask]) - residual[mask]
    return mask, n_valid, residual.shape, diff, attention_weights(s1[mask])


def loss_ur(residual_pred, stage1_pred, gt, s1, mask):
    '''
    Weighted L1 residual loss (1/N) sum_valid w_i |(x_i - x_hat_i) - r_i|.
    The gradient is zero where the argument is exactly zero.

    :rtype: :class:`~udepth.losses.masked.MaskedLossValue`
    '''
    mask, n_valid, shape, diff, weights = _targets(residual_pred, stage1_pred, gt, s1, mask)
    value = masked_mean(weights * np.abs(diff), n_valid)
    grad = scatter(shape, mask, -weights * np.sign(diff) / n_valid)
    return MaskedLossValue(value, n_valid, grad, None, 'ur')


def loss_ur2(residual_pred, stage1_pred, gt, s1, mask):
    '''
    Weighted squared residual loss (1/N) sum_valid w_i ((x_i - x_hat_i) - r_i)^2.
    '''
    mask, n_valid, shape, diff, weights = _targets(residual_pred, stage1_pred, gt, s1, mask)
    value = masked_mean(weights * diff * diff, n_valid)
    grad = scatter(shape, mask, -2.0 * weights * diff / n_valid)
    return MaskedLossValue(value, n_valid, grad, None, 'ur2')


def loss_urb(epoch, residual_pred, stage1_pred, gt, s1, mask):
    '''
    Epoch-dependent balanced loss: the L1 form on even epochs, the mean of
    the L1 and squared forms on odd epochs. Epoch 0 is even.
    '''
    if int(epoch) != epoch or epoch < 0:
        raise InvalidArgument('epoch must be a non-negative integer, got %r' % (epoch,))
    l1 = loss_ur(residual_pred, stage1_pred, gt, s1, mask)
    if epoch % 2 == 0:
        return l1
    l2 = loss_ur2(residual_pred, stage1_pred, gt, s1, mask)
    return MaskedLossValue(
        0.5 * (l1.value + l2.value), l1.n_valid,
        0.5 * (l1.grad_pred + l2.grad_pred), None, 'urb')


def residual_family(loss_name, epoch):
    '''
    :return: the loss family a stage-two epoch is trained with ('ur' or 'urb')
    '''
    if loss_name == 'ur':
        return 'ur'
    return 'ur' if epoch % 2 == 0 else 'urb'


def loss_residual(epoch, residual_pred, stage1_pred, gt, s1, mask, cfg):
    '''
    Refinement loss selected by the configuration: :func:`loss_urb` when
    ``cfg.epoch_balanced`` is set, :func:`loss_ur` otherwise.

    :type cfg: :class:`~udepth.losses.masked.LossConfig`
    '''
    if cfg.epoch_balanced:
        return loss_urb(epoch, residual_pred, stage1_pred, gt, s1, mask)
    return loss_ur(residual_pred, stage1_pred, gt, s1, mask)
