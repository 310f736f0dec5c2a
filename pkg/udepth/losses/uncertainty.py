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
Uncertainty-driven losses of the multiscale joint prediction step.

With s = 2 log(sigma) the per-pixel MAP objective under a Gaussian
likelihood and the Jeffrey's prior p(sigma) ~ 1/sigma becomes::

    e^(-s) (x_hat - x)^2 + c s        (c = 2, or c = 1 without the prior)

and its minimiser over s at a fixed residual r is s* = ln(r^2 / c).
'''
from decimal import Decimal, localcontext
import numpy as np
from udepth.core import InvalidArgument, kassert
from udepth.losses.masked import MaskedLossValue, prepare, masked_mean, scatter


def loss_ud(pred, gt, s, mask, cfg):
    '''
    Uncertainty-depth joint optimisation loss::

        (1/N) sum_valid [ e^(-s_i) (x_hat_i - x_i)^2 + c s_i ]

    :param pred: predicted depth (grid or array)
    :param gt: ground-truth depth (grid or array)
    :param s: predicted log-variance (grid or array)
    :param mask: validity (sparse grid or boolean array)
    :type cfg: :class:`~udepth.losses.masked.LossConfig`
    :rtype: :class:`~udepth.losses.masked.MaskedLossValue`
    '''
    mask, n_valid, (pred, gt, s) = prepare(mask, pred, gt, s)
    coeff = cfg.regularizer
    residual = pred[mask] - gt[mask]
    s_valid = s[mask]
    attenuation = np.exp(-s_valid)
    squared = attenuation * (residual * residual)
    value = masked_mean(squared + coeff * s_valid, n_valid)
    grad_pred = scatter(pred.shape, mask, 2.0 * attenuation * residual / n_valid)
    grad_s = scatter(pred.shape, mask, (coeff - squared) / n_valid)
    return MaskedLossValue(value, n_valid, grad_pred, grad_s, 'ud')


def loss_mse(pred, gt, mask):
    '''
    Masked mean squared error (1/N) sum_valid (x_hat_i - x_i)^2.
    '''
    mask, n_valid, (pred, gt) = prepare(mask, pred, gt)
    residual = pred[mask] - gt[mask]
    value = masked_mean(residual * residual, n_valid)
    grad_pred = scatter(pred.shape, mask, 2.0 * residual / n_valid)
    return MaskedLossValue(value, n_valid, grad_pred, None, 'mse')


def loss_multiscale(per_scale, cfg):
    '''
    Weighted multi-objective loss sum_k omega_k L_k.

    :param per_scale: list of :class:`~udepth.losses.masked.MaskedLossValue`, indexed by scale k (finest first)
    :type cfg: :class:`~udepth.losses.masked.LossConfig`
    :return: (total value, list of weighted MaskedLossValue, same order)
    '''
    if len(per_scale) != len(cfg.scale_weights):
        raise InvalidArgument('%d scale losses but %d scale weights' % (len(per_scale), len(cfg.scale_weights)))
    weighted = [term.scaled(weight) for term, weight in zip(per_scale, cfg.scale_weights)]
    value = 0.0
    for term in weighted:
        value += term.value
    return value, weighted


def pixel_objective(residual, s, jeffrey=True):
    '''
    Per-pixel joint objective e^(-s) r^2 + c s (vectorised over s).
    '''
    coeff = 2.0 if jeffrey else 1.0
    s = np.asarray(s, dtype=np.float64)
    return np.exp(-s) * residual * residual + coeff * s


def optimal_logvar(residual, jeffrey=True):
    '''
    :return: argmin over s of the per-pixel objective, ln(r^2 / c)
    '''
    coeff = 2.0 if jeffrey else 1.0
    return float(np.log(residual * residual / coeff))


def verify_map_identity(residual, sigma):
    '''
    Check the rewriting of the negative log posterior in terms of s::

        4 log(sigma) + r^2 / sigma^2  ==  e^(-s) r^2 + 2 s,   s = 2 log(sigma)

    Both sides are evaluated in 40-digit decimal arithmetic from the exact
    binary value of the inputs, so the returned gap only reflects the algebra.
    The additive constant of the Gaussian (log 2 pi / 2) is left out of both.

    :param residual: r
    :param sigma: standard deviation (> 0)
    :return: absolute difference of the two forms
    '''
    kassert.positive(sigma, 'sigma')
    with localcontext() as ctx:
        ctx.prec = 40
        r = Decimal(float(residual))
        sig = Decimal(float(sigma))
        log_sigma = sig.ln()
        lhs = 4 * log_sigma + r * r / (sig * sig)
        s = 2 * log_sigma
        rhs = (-s).exp() * r * r + 2 * s
        return float(abs(lhs - rhs))
