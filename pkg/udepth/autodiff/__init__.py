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
Minimal reverse-mode differentiable tensor engine.
'''
from udepth.autodiff.tensor import Tensor, Tape, GradientMap
from udepth.autodiff.ops import elementwise, relu, exp, log, add, sub, mul, scale, add_scalar
from udepth.autodiff.ops import softplus, clamp, total, conv2d, maxpool2, upsample_nearest2
from udepth.autodiff.ops import upsample_bilinear, concat_channels, concat_all, select_channel
from udepth.autodiff.ops import attach_loss, as_tensor
from udepth.autodiff.gradcheck import grad_check, finite_difference, one_sided_differences, recorded_gradient, near_zero
from udepth.autodiff.checkpoint import save_params, load_params, encode_params, decode_params
from udepth.core import TapeError


def backward(root):
    '''
    Back-propagate from a scalar tensor recorded on a tape.

    :return: :class:`~udepth.autodiff.tensor.GradientMap` of the tape leaves
    '''
    if root.tape is None:
        raise TapeError('root is not recorded on a tape')
    return root.tape.backward(root)
