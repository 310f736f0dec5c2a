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
Checkpoints of the networks and the two-step prediction pipeline.
'''
import numpy as np
from udepth.core import CheckpointError, InvalidArgument, kassert
from udepth.autodiff import save_params, load_params
from udepth.grid import build_pyramid
from udepth.model.config import ModelConfig
from udepth.model.networks import NETWORKS, forward_joint, forward_residual, compose_final


def save_model(path, model):
    '''
    Write the parameters of a network, with its architecture echo.

    :param path: output file
    :param model: :class:`~udepth.model.networks.JointModel` or :class:`~udepth.model.networks.ResidualNet`
    '''
    save_params(path, model.params, model.arch())


def load_model(path, kind=None):
    '''
    :param path: checkpoint file
    :param kind: expected network kind ('joint' or 'residual', default: any)
    :return: the network
    :raise CheckpointError: if the file is malformed or does not match its architecture
    :raise IOError: if the file cannot be read
    '''
    params, arch = load_params(path)
    config, found = ModelConfig.from_arch(arch)
    if kind is not None and found != kind:
        raise CheckpointError('%s holds a %s network, expected %s' % (path, found, kind))
    try:
        return NETWORKS[found](config, params)
    except InvalidArgument as ex:
        raise CheckpointError('%s does not match its architecture: %s' % (path, ex))


class Prediction(object):
    '''
    Outputs of the pipeline for one frame.

    :ivar stage1: finest depth of the first step (DepthGrid)
    :ivar s1: finest log-variance of the first step (LogVarGrid)
    :ivar residual: ResidualGrid of the refinement step (None without it)
    :ivar final: final depth (DepthGrid)
    '''

    def __init__(self, stage1, s1, residual=None):
        self.stage1 = stage1
        self.s1 = s1
        self.residual = residual
        self.final = stage1 if residual is None else compose_final(stage1, residual)


class Pipeline(object):
    '''
    Frozen first-step model with an optional refinement network.
    '''

    def __init__(self, joint, residual=None):
        '''
        :type joint: :class:`~udepth.model.networks.JointModel`
        :type residual: :class:`~udepth.model.networks.ResidualNet`
        '''
        kassert.not_none(joint)
        self.joint = joint
        self.residual = residual

    @classmethod
    def load(cls, joint_path, residual_path=None):
        joint = load_model(joint_path, 'joint')
        residual = load_model(residual_path, 'residual') if residual_path else None
        if residual is not None and residual.config.guide_channels != joint.config.guide_channels:
            raise CheckpointError('refinement and first-step checkpoints disagree on guide channels')
        return cls(joint, residual)

    def stage1(self, guide, sparse):
        '''
        :return: finest (DepthGrid, LogVarGrid) of the first step
        '''
        pyramid = build_pyramid(guide, sparse, self.joint.config.ns)
        return forward_joint(self.joint, pyramid)[-1]

    def predict(self, guide, sparse):
        '''
        :rtype: :class:`Prediction`
        '''
        depth, s = self.stage1(guide, sparse)
        residual = None
        if self.residual is not None:
            residual = forward_residual(self.residual, depth, guide, sparse)
        return Prediction(depth, s, residual)


def params_equal(first, second):
    '''
    :return: True if two parameter sets are bit-identical
    '''
    if list(first) != list(second):
        return False
    return all(np.array_equal(first[name], second[name]) for name in first)
