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
Loss functions of both training steps.

Each loss returns a :class:`MaskedLossValue` carrying the value and the
analytic per-pixel gradients; the trainer places them on the tape with
:func:`udepth.autodiff.attach_loss`.
'''
from udepth.losses.masked import MaskedLossValue, LossConfig
from udepth.losses.uncertainty import loss_ud, loss_mse, loss_multiscale
from udepth.losses.uncertainty import verify_map_identity, optimal_logvar, pixel_objective
from udepth.losses.residual import loss_ur, loss_ur2, loss_urb, loss_residual, attention_weights, residual_family


__all__ = [
    'MaskedLossValue', 'LossConfig',
    'loss_ud', 'loss_mse', 'loss_multiscale',
    'verify_map_identity', 'optimal_logvar', 'pixel_objective',
    'loss_ur', 'loss_ur2', 'loss_urb', 'loss_residual', 'attention_weights', 'residual_family',
]
