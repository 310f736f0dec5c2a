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
Differentiable operators.

Every operator takes :class:`~udepth.autodiff.tensor.Tensor` inputs (plain
arrays are wrapped as constants) and records its output on the tape of its
inputs, together with the local backward rule.
There is no broadcasting: elementwise operands must have identical shapes.

Conventions that keep gradients deterministic:

- relu'(0) = 1 and clamp'(bound) = 1
- maxpool2 routes the gradient to the first maximal position of a window
'''
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from udepth.core import DomainError, InvalidArgument
from udepth.autodiff.tensor import Tensor
from udepth.grid.ops import bilinear_matrix


def as_tensor(value):
    if isinstance(value, Tensor):
        return value
    return Tensor.constant(value)


def _tape_of(inputs):
    tapes = []
    for tensor in inputs:
        if tensor.tape is not None and all(tensor.tape is not t for t in tapes):
            tapes.append(tensor.tape)
    if len(tapes) > 1:
        raise InvalidArgument('operands are recorded on different tapes')
    return tapes[0] if tapes else None


def _result(data, inputs, backward, op):
    tape = _tape_of(inputs)
    if tape is None:
        return Tensor(data, op=op)
    return Tensor(data, tape=tape, parents=inputs, backward=backward, op=op)


def _same_shape(a, b, op):
    if a.shape != b.shape:
        raise InvalidArgument('%s: shape mismatch %s vs %s' % (op, a.shape, b.shape))


# ################### Elementwise ####################


def relu(x):
    x = as_tensor(x)
    mask = x.data >= 0
    return _result(np.where(mask, x.data, 0.0), (x,), lambda g: (g * mask,), 'relu')


def exp(x):
    x = as_tensor(x)
    out = np.exp(x.data)
    return _result(out, (x,), lambda g: (g * out,), 'exp')


def log(x):
    x = as_tensor(x)
    if np.any(x.data <= 0):
        raise DomainError('log of a non-positive entry')
    return _result(np.log(x.data), (x,), lambda g: (g / x.data,), 'log')


def add(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _same_shape(a, b, 'add')
    return _result(a.data + b.data, (a, b), lambda g: (g, g), 'add')


def sub(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _same_shape(a, b, 'sub')
    return _result(a.data - b.data, (a, b), lambda g: (g, -g), 'sub')


def mul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _same_shape(a, b, 'mul')
    return _result(a.data * b.data, (a, b), lambda g: (g * b.data, g * a.data), 'mul')


def scale(x, factor):
    x = as_tensor(x)
    factor = float(factor)
    return _result(x.data * factor, (x,), lambda g: (g * factor,), 'scale')


def add_scalar(x, value):
    x = as_tensor(x)
    return _result(x.data + float(value), (x,), lambda g: (g,), 'add_scalar')


def softplus(x):
    x = as_tensor(x)
    # 0.5 * (1 + tanh(x / 2)) is the overflow-free logistic function
    slope = 0.5 * (1.0 + np.tanh(0.5 * x.data))
    return _result(np.logaddexp(0.0, x.data), (x,), lambda g: (g * slope,), 'softplus')


def clamp(x, low, high):
    x = as_tensor(x)
    mask = (x.data >= low) & (x.data <= high)
    return _result(np.clip(x.data, low, high), (x,), lambda g: (g * mask,), 'clamp')


def total(x):
    '''
    Sum of all entries, as a scalar tensor.
    '''
    x = as_tensor(x)
    return _result(np.sum(x.data), (x,), lambda g: (np.full(x.shape, float(g)),), 'total')


_ELEMENTWISE = {
    'relu': relu,
    'exp': exp,
    'log': log,
    'add': add,
    'sub': sub,
    'mul': mul,
    'scale': scale,
    'add_scalar': add_scalar,
    'softplus': softplus,
    'clamp': clamp,
}


def elementwise(op, *args):
    '''
    Dispatch an elementwise operator by name.

    :param op: one of relu, exp, log, add, sub, mul, scale, add_scalar, softplus, clamp
    :param args: operands (scale / add_scalar take a tensor and a scalar)
    '''
    if op not in _ELEMENTWISE:
        raise InvalidArgument('unknown elementwise operator %s' % op)
    return _ELEMENTWISE[op](*args)


# ################### Spatial ####################


def _check_4d(x, op):
    if x.data.ndim != 4:
        raise InvalidArgument('%s expects an (N, C, H, W) tensor, got %s' % (op, x.shape))


def conv2d(x, weights, bias, stride=1, padding=0):
    '''
    2-d cross-correlation with zero padding.

    :param x: (N, C, H, W) input
    :param weights: (O, C, k, k) kernel
    :param bias: (O,) bias
    :param stride: 1 or 2
    :param padding: zero padding on each side
    :return: (N, O, floor((H + 2p - k) / s) + 1, floor((W + 2p - k) / s) + 1)
    '''
    x, weights, bias = as_tensor(x), as_tensor(weights), as_tensor(bias)
    _check_4d(x, 'conv2d')
    if weights.data.ndim != 4 or weights.shape[2] != weights.shape[3]:
        raise InvalidArgument('conv2d weights must be (O, C, k, k), got %s' % (weights.shape,))
    out_ch, in_ch, ksize = weights.shape[0], weights.shape[1], weights.shape[2]
    if x.shape[1] != in_ch:
        raise InvalidArgument('conv2d: input has %d channels, weights expect %d' % (x.shape[1], in_ch))
    if bias.shape != (out_ch,):
        raise InvalidArgument('conv2d: bias shape %s does not match %d outputs' % (bias.shape, out_ch))
    if stride not in (1, 2):
        raise InvalidArgument('conv2d: stride must be 1 or 2')
    if padding < 0:
        raise InvalidArgument('conv2d: negative padding')
    batch, _, height, width = x.shape
    padded_h, padded_w = height + 2 * padding, width + 2 * padding
    if padded_h < ksize or padded_w < ksize:
        raise InvalidArgument('conv2d: kernel %d larger than padded input %s' % (ksize, (padded_h, padded_w)))
    out_h = (padded_h - ksize) // stride + 1
    out_w = (padded_w - ksize) // stride + 1
    xp = np.pad(x.data, ((0, 0), (0, 0), (padding, padding), (padding, padding)), mode='constant')
    # (N, C, out_h, out_w, k, k)
    windows = sliding_window_view(xp, (ksize, ksize), axis=(2, 3))[:, :, ::stride, ::stride]
    out = np.tensordot(windows, weights.data, axes=([1, 4, 5], [1, 2, 3])).transpose(0, 3, 1, 2)
    out = out + bias.data.reshape(1, out_ch, 1, 1)

    def backward(g):
        grad_w = np.tensordot(g, windows, axes=([0, 2, 3], [0, 2, 3]))
        grad_b = g.sum(axis=(0, 2, 3))
        grad_xp = np.zeros_like(xp)
        for i in range(ksize):
            for j in range(ksize):
                contrib = np.tensordot(g, weights.data[:, :, i, j], axes=([1], [0])).transpose(0, 3, 1, 2)
                grad_xp[:, :, i:i + stride * out_h:stride, j:j + stride * out_w:stride] += contrib
        grad_x = grad_xp[:, :, padding:padding + height, padding:padding + width]
        return grad_x, grad_w, grad_b
    return _result(out, (x, weights, bias), backward, 'conv2d')


def maxpool2(x):
    '''
    2x2, stride 2 max pooling. Ties resolve to the first position
    (row-major) of the window.
    '''
    x = as_tensor(x)
    _check_4d(x, 'maxpool2')
    batch, channels, height, width = x.shape
    if height % 2 or width % 2:
        raise InvalidArgument('maxpool2 needs even spatial dims, got %s' % ((height, width),))
    blocks = x.data.reshape(batch, channels, height // 2, 2, width // 2, 2).transpose(0, 1, 2, 4, 3, 5)
    blocks = blocks.reshape(batch, channels, height // 2, width // 2, 4)
    arg = np.argmax(blocks, axis=-1)
    out = np.take_along_axis(blocks, arg[..., np.newaxis], axis=-1)[..., 0]

    def backward(g):
        routed = np.zeros(blocks.shape)
        np.put_along_axis(routed, arg[..., np.newaxis], g[..., np.newaxis], axis=-1)
        routed = routed.reshape(batch, channels, height // 2, width // 2, 2, 2).transpose(0, 1, 2, 4, 3, 5)
        return (routed.reshape(batch, channels, height, width),)
    return _result(out, (x,), backward, 'maxpool2')


def upsample_nearest2(x):
    '''
    Replicate every pixel into a 2x2 block.
    '''
    x = as_tensor(x)
    _check_4d(x, 'upsample_nearest2')
    batch, channels, height, width = x.shape
    out = np.repeat(np.repeat(x.data, 2, axis=2), 2, axis=3)

    def backward(g):
        return (g.reshape(batch, channels, height, 2, width, 2).sum(axis=(3, 5)),)
    return _result(out, (x,), backward, 'upsample_nearest2')


def upsample_bilinear(x, factor):
    '''
    Bilinear upsampling (align corners false) by an integer factor,
    the differentiable counterpart of :func:`udepth.grid.ops.upsample_bilinear`.
    '''
    x = as_tensor(x)
    _check_4d(x, 'upsample_bilinear')
    rows = bilinear_matrix(x.shape[2], factor)
    cols = bilinear_matrix(x.shape[3], factor)
    out = np.matmul(np.matmul(rows, x.data), cols.T)

    def backward(g):
        return (np.matmul(np.matmul(rows.T, g), cols),)
    return _result(out, (x,), backward, 'upsample_bilinear')


def concat_channels(a, b):
    '''
    Concatenate along the channel axis, channels of a first.
    '''
    a, b = as_tensor(a), as_tensor(b)
    _check_4d(a, 'concat_channels')
    _check_4d(b, 'concat_channels')
    if a.shape[0] != b.shape[0] or a.shape[2:] != b.shape[2:]:
        raise InvalidArgument('concat_channels: %s and %s differ outside the channel axis' % (a.shape, b.shape))
    split = a.shape[1]
    out = np.concatenate([a.data, b.data], axis=1)
    return _result(out, (a, b), lambda g: (g[:, :split], g[:, split:]), 'concat_channels')


def concat_all(tensors):
    '''
    Concatenate a list of tensors along the channel axis, in order.
    '''
    out = as_tensor(tensors[0])
    for tensor in tensors[1:]:
        out = concat_channels(out, tensor)
    return out


def select_channel(x, index):
    '''
    :return: (N, 1, H, W) slice of channel ``index``
    '''
    x = as_tensor(x)
    _check_4d(x, 'select_channel')

    def backward(g):
        grad = np.zeros(x.shape)
        grad[:, index:index + 1] = g
        return (grad,)
    return _result(x.data[:, index:index + 1], (x,), backward, 'select_channel')


# ################### Losses ####################


def attach_loss(outputs, value, grads):
    '''
    Place an externally evaluated scalar loss on the tape.

    :param outputs: tensors the loss was computed from
    :param value: loss value
    :param grads: d(loss)/d(output) arrays, one per output (None for no gradient)
    :return: scalar tensor whose backward distributes ``grads``
    '''
    outputs = tuple(as_tensor(o) for o in outputs)
    if len(outputs) != len(grads):
        raise InvalidArgument('attach_loss: %d outputs but %d gradients' % (len(outputs), len(grads)))
    for out, grad in zip(outputs, grads):
        if grad is not None and np.shape(grad) != out.shape:
            raise InvalidArgument('attach_loss: gradient shape %s for output %s' % (np.shape(grad), out.shape))

    def backward(g):
        return tuple(None if grad is None else float(g) * np.asarray(grad) for grad in grads)
    return _result(np.asarray(float(value)), outputs, backward, 'loss')
