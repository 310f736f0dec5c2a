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
Architecture configuration of both networks.

The configuration is echoed into every checkpoint as a single
``key=value;key=value`` string and compared on load.
'''
from collections import OrderedDict
from udepth.core import InvalidArgument, CheckpointError, kassert
from udepth.core.kvconfig import KeyValueConfig, parse_value, format_value
from udepth.grid.ops import MAX_PYRAMID_LEVELS

RESIDUAL_INPUTS = ('guide', 'stage1', 'sparse')
KINDS = ('joint', 'residual')


class ModelConfig(KeyValueConfig):
    '''
    :ns: number of completion blocks (pyramid levels), 1 to 4
    :guide_channels: 1 (gray) or 3 (color) guide channels
    :channels: encoder widths of a completion block
    :kernel: encoder kernel size of the blocks except the coarsest
    :coarse_kernel: encoder kernel size of the coarsest block
    :depth_scale: output scale of the depth and residual heads [m]
    :residual_channels: encoder widths of the refinement network
    :residual_inputs: inputs of the refinement network, subset of (guide, stage1, sparse)
    :uncertainty: whether the completion blocks carry a log-variance head
    '''

    defaults = OrderedDict([
        ('ns', 4),
        ('guide_channels', 1),
        ('channels', (16, 32, 64)),
        ('kernel', 3),
        ('coarse_kernel', 5),
        ('depth_scale', 20.0),
        ('residual_channels', (16, 32)),
        ('residual_inputs', RESIDUAL_INPUTS),
        ('uncertainty', True),
    ])

    def validate(self):
        kassert.in_range(self.ns, 1, MAX_PYRAMID_LEVELS, 'ns')
        kassert.is_in(self.guide_channels, (1, 3))
        if len(self.channels) != 3:
            raise InvalidArgument('a completion block has 3 encoder stages, got channels %s' % (self.channels,))
        if len(self.residual_channels) != 2:
            raise InvalidArgument('the refinement network has 2 encoder stages, got %s' % (self.residual_channels,))
        for width in self.channels + self.residual_channels:
            kassert.positive(width, 'channel width')
        for ksize in (self.kernel, self.coarse_kernel):
            if ksize < 1 or ksize % 2 == 0:
                raise InvalidArgument('kernel sizes must be positive and odd, got %s' % ksize)
        kassert.positive(self.depth_scale, 'depth_scale')
        if not self.residual_inputs:
            raise InvalidArgument('the refinement network needs at least one input')
        for name in self.residual_inputs:
            kassert.is_in(name, RESIDUAL_INPUTS)
        if len(set(self.residual_inputs)) != len(self.residual_inputs):
            raise InvalidArgument('duplicate residual input in %s' % (self.residual_inputs,))

    @property
    def block_in_channels(self):
        '''
        guide, sparse depth, validity mask and prior depth
        '''
        return self.guide_channels + 3

    @property
    def residual_in_channels(self):
        sizes = {'guide': self.guide_channels, 'stage1': 1, 'sparse': 2}
        return sum(sizes[name] for name in self.residual_inputs)

    @property
    def min_divisor(self):
        '''
        :return: the frame dims must be divisible by this value
        '''
        return 2 ** (self.ns - 1) * 2 ** len(self.channels)

    def check_frame(self, shape):
        '''
        :raise InvalidArgument: if a frame of this shape cannot be processed
        '''
        for dim in shape:
            if dim % self.min_divisor:
                raise InvalidArgument('frame dims %s must be divisible by %d for ns=%d' % (shape, self.min_divisor, self.ns))

    def to_arch(self, kind):
        '''
        :param kind: 'joint' or 'residual'
        :return: the architecture echo stored in checkpoints
        '''
        kassert.is_in(kind, KINDS)
        return ';'.join(['kind=%s' % kind] + ['%s=%s' % item for item in self.to_items()])

    @classmethod
    def from_arch(cls, arch):
        '''
        :return: (ModelConfig, kind)
        :raise CheckpointError: if the echo cannot be parsed
        '''
        values = OrderedDict()
        kind = None
        try:
            for token in arch.split(';'):
                key, text = token.split('=', 1)
                if key == 'kind':
                    kind = text
                elif key in cls.defaults:
                    values[key] = parse_value(text, cls.defaults[key])
                else:
                    raise InvalidArgument('unknown architecture key %r' % key)
            if kind not in KINDS:
                raise InvalidArgument('unknown network kind %r' % kind)
            return cls(**values), kind
        except (InvalidArgument, ValueError) as ex:
            raise CheckpointError('bad architecture echo %r: %s' % (arch, ex))

    def describe(self):
        return ', '.join('%s=%s' % (k, format_value(v)) for k, v in self._values.items())
