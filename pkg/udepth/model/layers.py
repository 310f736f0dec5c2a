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
Layer helpers and parameter initialisation.
'''
from collections import OrderedDict
import numpy as np
from udepth.core import InvalidArgument, make_rng
from udepth.autodiff import conv2d, relu, maxpool2, upsample_nearest2, concat_channels


def conv_shape(out_channels, in_channels, ksize):
    return (out_channels, in_channels, ksize, ksize)


def glorot_bound(shape):
    '''
    :param shape: (O, C, k, k) kernel shape
    :return: sqrt(6 / (fan_in + fan_out))
    '''
    receptive = shape[2] * shape[3]
    return np.sqrt(6.0 / (shape[1] * receptive + shape[0] * receptive))


def init_params(seed, shapes, zero=()):
    '''
    Glorot-uniform kernels and zero biases. Every tensor draws from its
    own named random stream, so adding a layer does not change the others.

    :param seed: global seed
    :param shapes: OrderedDict name -> shape (kernels end with '.w', biases with '.b')
    :param zero: names of layers (without suffix) initialised to zero
    :return: OrderedDict name -> array
    '''
    params = OrderedDict()
    for name, shape in shapes.items():
        layer = name.rsplit('.', 1)[0]
        if name.endswith('.b') or layer in zero:
            params[name] = np.zeros(shape)
        else:
            bound = glorot_bound(shape)
            params[name] = make_rng(seed, 'init:' + name).uniform(-bound, bound, size=shape)
    return params


def check_params(shapes, params):
    '''
    :return: an OrderedDict copy of params in the order of shapes
    :raise InvalidArgument: on missing, unexpected or mis-shaped tensors
    '''
    missing = [name for name in shapes if name not in params]
    extra = [name for name in params if name not in shapes]
    if missing or extra:
        raise InvalidArgument('parameter names differ (missing: %s, unexpected: %s)' % (missing, extra))
    checked = OrderedDict()
    for name, shape in shapes.items():
        value = np.array(params[name], dtype=np.float64, copy=True)
        if value.shape != tuple(shape):
            raise InvalidArgument('parameter %s has shape %s, expected %s' % (name, value.shape, tuple(shape)))
        value.setflags(write=False)
        checked[name] = value
    return checked


def conv(weights, layer, x):
    '''
    Same-size convolution with the kernel and bias of a layer.
    '''
    kernel = weights[layer + '.w']
    return conv2d(x, kernel, weights[layer + '.b'], stride=1, padding=kernel.shape[2] // 2)


def encoder_stage(weights, layer, x):
    '''
    :return: (skip, pooled) = (relu(conv(x)), maxpool2(skip))
    '''
    skip = relu(conv(weights, layer, x))
    return skip, maxpool2(skip)


def decoder_stage(weights, layer, x, skip):
    '''
    relu(conv(concat(upsample_nearest2(x), skip)))
    '''
    up = upsample_nearest2(x)
    if up.shape[2:] != skip.shape[2:]:
        raise InvalidArgument('decoder %s: upsampled %s does not match skip %s' % (layer, up.shape, skip.shape))
    return relu(conv(weights, layer, concat_channels(up, skip)))
