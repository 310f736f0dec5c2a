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
The two networks: the multiscale joint prediction network (a chain of
completion blocks, coarse to fine) and the uncertainty-attention residual
refinement network.

A network object holds its configuration and a frozen parameter set.
Forward passes take a ``weights`` mapping of name -> tensor, built by
:func:`Network.weights`: tape leaves while training, constants otherwise.
'''
from collections import OrderedDict
import numpy as np
from udepth.core import InvalidArgument, kassert
from udepth.autodiff import Tensor, scale, add_scalar, softplus, clamp, upsample_bilinear, concat_all
from udepth.grid import DepthGrid, LogVarGrid, ResidualGrid, ScalePyramid
from udepth.model.config import ModelConfig
from udepth.model import layers
from udepth.model.layers import conv_shape, check_params, conv, encoder_stage, decoder_stage

#: floor added to the depth head output [m]
DEPTH_FLOOR = 1e-3
#: bound of the log-variance head
S_BOUND = 10.0


def _grid_tensor(values):
    '''
    :param values: (H, W) or (C, H, W) array
    :return: (1, C, H, W) constant tensor
    '''
    values = np.asarray(values, dtype=np.float64)
    if values.ndim == 2:
        values = values[np.newaxis]
    return Tensor.constant(values[np.newaxis])


class Network(object):
    '''
    Base class of the networks. Subclasses implement :func:`param_shapes`.
    '''

    kind = None
    zero_layers = ()

    def __init__(self, config, params):
        '''
        :type config: :class:`~udepth.model.config.ModelConfig`
        :param params: OrderedDict name -> array
        '''
        kassert.is_of_types(config, ModelConfig)
        self.config = config
        self.params = check_params(self.param_shapes(), params)

    @classmethod
    def init(cls, seed, config):
        '''
        :return: a network with freshly initialised parameters
        '''
        return cls(config, layers.init_params(seed, cls.shapes_for(config), cls.zero_layers))

    @classmethod
    def shapes_for(cls, config):
        raise NotImplementedError('shapes_for is not overridden by %s' % cls.__name__)

    def param_shapes(self):
        '''
        :return: OrderedDict name -> shape
        '''
        return self.shapes_for(self.config)

    def weights(self, tape=None):
        '''
        :param tape: record the parameters as leaves of this tape (default: None, constants)
        :return: OrderedDict name -> Tensor
        '''
        if tape is None:
            return OrderedDict((name, Tensor.constant(value)) for name, value in self.params.items())
        return OrderedDict((name, tape.leaf(value, name)) for name, value in self.params.items())

    def with_params(self, params):
        '''
        :return: a network of the same architecture with other parameters
        '''
        return type(self)(self.config, params)

    def arch(self):
        return self.config.to_arch(self.kind)

    def num_params(self):
        return sum(value.size for value in self.params.values())


class CompletionBlock(object):
    '''
    U-net style predictor of one pyramid scale with a depth head and an
    optional log-variance head sharing the decoder.
    '''

    def __init__(self, config, level):
        '''
        :param config: :class:`~udepth.model.config.ModelConfig`
        :param level: scale index k, 0 is the finest
        '''
        kassert.in_range(level, 0, config.ns - 1, 'level')
        self.config = config
        self.level = level
        self.prefix = 'block%d' % level
        self.encoder_kernel = config.coarse_kernel if self.is_coarsest else config.kernel

    @property
    def is_coarsest(self):
        return self.level == self.config.ns - 1

    def param_shapes(self):
        c1, c2, c3 = self.config.channels
        kenc, kdec = self.encoder_kernel, self.config.kernel
        stages = [
            ('enc1', conv_shape(c1, self.config.block_in_channels, kenc)),
            ('enc2', conv_shape(c2, c1, kenc)),
            ('enc3', conv_shape(c3, c2, kenc)),
            ('dec3', conv_shape(c3, c3 + c3, kdec)),
            ('dec2', conv_shape(c2, c3 + c2, kdec)),
            ('dec1', conv_shape(c1, c2 + c1, kdec)),
            ('head_depth', conv_shape(1, c1, 1)),
        ]
        if self.config.uncertainty:
            stages.append(('head_s', conv_shape(1, c1, 1)))
        shapes = OrderedDict()
        for layer, shape in stages:
            shapes['%s.%s.w' % (self.prefix, layer)] = shape
            shapes['%s.%s.b' % (self.prefix, layer)] = (shape[0],)
        return shapes

    def input_tensor(self, guide, sparse, prior=None):
        '''
        Input channels: guide, sparse depth / depth_scale, validity, prior / depth_scale.

        :param guide: GuideImage
        :param sparse: SparseDepthGrid
        :param prior: (1, 1, H, W) Tensor, DepthGrid or None (zeros)
        '''
        if guide.shape != sparse.shape:
            raise InvalidArgument('guide %s and sparse %s dims differ' % (guide.shape, sparse.shape))
        if guide.channels != self.config.guide_channels:
            raise InvalidArgument('expected %d guide channels, got %d' % (self.config.guide_channels, guide.channels))
        inv_scale = 1.0 / self.config.depth_scale
        if prior is None:
            prior = _grid_tensor(np.zeros(sparse.shape))
        elif isinstance(prior, DepthGrid):
            prior = _grid_tensor(prior.depth)
        if prior.shape != (1, 1) + sparse.shape:
            raise InvalidArgument('prior %s does not match block input %s' % (prior.shape, sparse.shape))
        return concat_all([
            _grid_tensor(guide.values),
            _grid_tensor(sparse.depth * inv_scale),
            _grid_tensor(sparse.valid),
            scale(prior, inv_scale),
        ])

    def forward(self, weights, x):
        '''
        :param weights: name -> Tensor mapping holding this block's parameters
        :param x: (1, C, H, W) input tensor
        :return: (depth, s) tensors of shape (1, 1, H, W), s is None without an uncertainty head
        '''
        p = self.prefix
        e1, x = encoder_stage(weights, p + '.enc1', x)
        e2, x = encoder_stage(weights, p + '.enc2', x)
        e3, x = encoder_stage(weights, p + '.enc3', x)
        x = decoder_stage(weights, p + '.dec3', x, e3)
        x = decoder_stage(weights, p + '.dec2', x, e2)
        x = decoder_stage(weights, p + '.dec1', x, e1)
        depth = add_scalar(scale(softplus(conv(weights, p + '.head_depth', x)), self.config.depth_scale), DEPTH_FLOOR)
        s = None
        if self.config.uncertainty:
            s = clamp(conv(weights, p + '.head_s', x), -S_BOUND, S_BOUND)
        return depth, s


class JointModel(Network):
    '''
    NS completion blocks run coarse to fine. Every finer block receives the
    bilinearly upsampled depth of the previous block as its prior; the
    upsampling is part of the recorded graph.
    '''

    kind = 'joint'

    @classmethod
    def shapes_for(cls, config):
        shapes = OrderedDict()
        for block in cls.blocks_for(config):
            shapes.update(block.param_shapes())
        return shapes

    @classmethod
    def blocks_for(cls, config):
        '''
        :return: completion blocks, coarse to fine
        '''
        return [CompletionBlock(config, level) for level in range(config.ns - 1, -1, -1)]

    @property
    def blocks(self):
        return self.blocks_for(self.config)

    def block(self, level):
        '''
        :param level: scale index k (0 is the finest)
        '''
        return CompletionBlock(self.config, level)

    def forward_tensors(self, weights, pyramid):
        '''
        :param weights: name -> Tensor mapping
        :type pyramid: :class:`~udepth.grid.types.ScalePyramid`
        :return: list of (depth, s) tensors, coarse to fine
        '''
        kassert.is_of_types(pyramid, ScalePyramid)
        if pyramid.num_levels != self.config.ns:
            raise InvalidArgument('pyramid has %d levels, the model has ns=%d' % (pyramid.num_levels, self.config.ns))
        self.config.check_frame(pyramid.finest()[1].shape)
        outputs = []
        for block, (guide, sparse) in zip(self.blocks, pyramid.levels):
            prior = upsample_bilinear(outputs[-1][0], ScalePyramid.factor) if outputs else None
            outputs.append(block.forward(weights, block.input_tensor(guide, sparse, prior)))
        return outputs

    def strip_uncertainty(self):
        '''
        :return: a model without log-variance heads (they are not needed at inference)
        '''
        config = self.config.replace(uncertainty=False)
        params = OrderedDict((n, v) for n, v in self.params.items() if '.head_s.' not in n)
        return JointModel(config, params)


class ResidualNet(Network):
    '''
    Simplified U-net (2 encoder and 2 decoder stages) predicting a signed
    depth correction R. The head starts at zero, so refinement starts as
    the identity.
    '''

    kind = 'residual'
    zero_layers = ('res.head',)

    @classmethod
    def shapes_for(cls, config):
        r1, r2 = config.residual_channels
        k = config.kernel
        stages = [
            ('enc1', conv_shape(r1, config.residual_in_channels, k)),
            ('enc2', conv_shape(r2, r1, k)),
            ('dec2', conv_shape(r2, r2 + r2, k)),
            ('dec1', conv_shape(r1, r2 + r1, k)),
            ('head', conv_shape(1, r1, 1)),
        ]
        shapes = OrderedDict()
        for layer, shape in stages:
            shapes['res.%s.w' % layer] = shape
            shapes['res.%s.b' % layer] = (shape[0],)
        return shapes

    def input_tensor(self, stage1_depth, guide, sparse):
        '''
        Channels of the configured inputs, in configuration order.
        '''
        shape = stage1_depth.shape
        if guide.shape != shape or sparse.shape != shape:
            raise InvalidArgument('stage-1 %s, guide %s and sparse %s dims differ' % (shape, guide.shape, sparse.shape))
        if shape[0] % 4 or shape[1] % 4:
            raise InvalidArgument('refinement input dims %s must be divisible by 4' % (shape,))
        inv_scale = 1.0 / self.config.depth_scale
        channels = []
        for name in self.config.residual_inputs:
            if name == 'guide':
                channels.append(_grid_tensor(guide.values))
            elif name == 'stage1':
                channels.append(_grid_tensor(stage1_depth.depth * inv_scale))
            else:
                channels.append(_grid_tensor(sparse.depth * inv_scale))
                channels.append(_grid_tensor(sparse.valid))
        return concat_all(channels)

    def forward(self, weights, x):
        '''
        :return: (1, 1, H, W) residual tensor R = depth_scale * head
        '''
        e1, h = encoder_stage(weights, 'res.enc1', x)
        e2, h = encoder_stage(weights, 'res.enc2', h)
        h = decoder_stage(weights, 'res.dec2', h, e2)
        h = decoder_stage(weights, 'res.dec1', h, e1)
        return scale(conv(weights, 'res.head', h), self.config.depth_scale)


# ################### Grid level API ####################


def forward_block(model, level, guide, sparse, prior=None):
    '''
    Run one completion block of a joint model.

    :type model: :class:`JointModel`
    :param level: scale index of the block (0 is the finest)
    :param guide: GuideImage at that scale
    :param sparse: SparseDepthGrid at that scale
    :param prior: DepthGrid, None only for the coarsest block
    :return: (DepthGrid, LogVarGrid); the log-variance is 0 without an uncertainty head
    '''
    block = model.block(level)
    if prior is None and not block.is_coarsest:
        raise InvalidArgument('block %d needs the upsampled prior of the coarser block' % level)
    weights = model.weights()
    depth, s = block.forward(weights, block.input_tensor(guide, sparse, prior))
    return _to_grids(depth, s)


def _to_grids(depth, s):
    depth_grid = DepthGrid(depth.data[0, 0])
    s_grid = LogVarGrid(np.zeros(depth_grid.shape) if s is None else s.data[0, 0])
    return depth_grid, s_grid


def forward_joint(model, pyramid):
    '''
    :type model: :class:`JointModel`
    :type pyramid: :class:`~udepth.grid.types.ScalePyramid`
    :return: list of (DepthGrid, LogVarGrid) per scale, coarse to fine (finest last)
    '''
    outputs = model.forward_tensors(model.weights(), pyramid)
    return [_to_grids(depth, s) for depth, s in outputs]


def forward_residual(net, stage1_depth, guide, sparse):
    '''
    :type net: :class:`ResidualNet`
    :param stage1_depth: DepthGrid of the frozen first step
    :param guide: GuideImage
    :param sparse: SparseDepthGrid
    :rtype: :class:`~udepth.grid.types.ResidualGrid`
    '''
    residual = net.forward(net.weights(), net.input_tensor(stage1_depth, guide, sparse))
    return ResidualGrid(residual.data[0, 0])


def compose_final(stage1_depth, residual):
    '''
    R + X_hat, clamped below at 1 mm.

    :param stage1_depth: DepthGrid
    :param residual: ResidualGrid (or DepthGrid / array)
    :rtype: :class:`~udepth.grid.types.DepthGrid`
    '''
    values = np.asarray(getattr(residual, 'residual', getattr(residual, 'depth', residual)), dtype=np.float64)
    if values.shape != stage1_depth.shape:
        raise InvalidArgument('stage-1 %s and residual %s dims differ' % (stage1_depth.shape, values.shape))
    return DepthGrid(np.maximum(stage1_depth.depth + values, DEPTH_FLOOR))


def init_params(seed, config, kind='joint'):
    '''
    :param seed: global seed
    :type config: :class:`~udepth.model.config.ModelConfig`
    :param kind: 'joint' or 'residual'
    :return: OrderedDict name -> array
    '''
    kassert.is_in(kind, NETWORKS)
    return NETWORKS[kind].init(seed, config).params


NETWORKS = {JointModel.kind: JointModel, ResidualNet.kind: ResidualNet}
