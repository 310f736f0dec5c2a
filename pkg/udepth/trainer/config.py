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
Training configuration.

A configuration file holds ``key=value`` lines of both the training
configuration and the model architecture (:class:`~udepth.model.ModelConfig`)::

    # stage one, fast run
    stage=one
    epochs=5
    loss=ud
    ns=2
'''
from collections import OrderedDict
from udepth.core import InvalidArgument, kassert
from udepth.core.kvconfig import KeyValueConfig
from udepth.model import ModelConfig

STAGE_LOSSES = {'one': ('ud', 'mse'), 'two': ('ur', 'urb')}
STAGE_LR = {'one': 1e-4, 'two': 2e-4}
STAGE_LOSS = {'one': 'ud', 'two': 'urb'}


class TrainConfig(KeyValueConfig):
    '''
    :stage: 'one' (multiscale joint prediction) or 'two' (residual refinement)
    :lr: base learning rate, 0 selects the stage default (1e-4 / 2e-4)
    :epochs: number of epochs (>= 1)
    :batch: frames per optimiser step
    :lr_decay: learning rate factor applied every ``lr_decay_every`` epochs
    :lr_decay_every: epochs between two decays
    :loss: 'ud' or 'mse' for stage one, 'ur' or 'urb' for stage two, 'auto' for the stage default
    :jeffrey: use the Jeffrey's prior regulariser (coefficient 2) in the ud loss
    :scale_weights: omega_k of the multiscale loss (finest first), the first ns are used
    :seed: seed of the parameter initialisation and of the shuffling
    :eval_frames: frames held out at the end of the dataset for evaluation (0: evaluate on the training frames)
    :workers: threads used to process the frames of a batch
    '''

    defaults = OrderedDict([
        ('stage', 'one'),
        ('lr', 0.0),
        ('epochs', 30),
        ('batch', 4),
        ('lr_decay', 0.5),
        ('lr_decay_every', 10),
        ('loss', 'auto'),
        ('jeffrey', True),
        ('scale_weights', (1.0, 0.5, 0.25, 0.125)),
        ('seed', 0),
        ('eval_frames', 0),
        ('workers', 1),
    ])

    def validate(self):
        kassert.is_in(self.stage, tuple(STAGE_LOSSES))
        if self.lr < 0:
            raise InvalidArgument('lr must be positive (or 0 for the stage default), got %s' % self.lr)
        if self.epochs < 1:
            raise InvalidArgument('epochs must be >= 1, got %s' % self.epochs)
        kassert.positive(self.batch, 'batch')
        kassert.positive(self.lr_decay, 'lr_decay')
        kassert.positive(self.lr_decay_every, 'lr_decay_every')
        if self.loss != 'auto':
            kassert.is_in(self.loss, STAGE_LOSSES[self.stage])
        for weight in self.scale_weights:
            kassert.positive(weight, 'scale weight')
        if self.eval_frames < 0:
            raise InvalidArgument('eval_frames must be >= 0')
        kassert.positive(self.workers, 'workers')

    @property
    def base_lr(self):
        return self.lr if self.lr > 0 else STAGE_LR[self.stage]

    @property
    def loss_name(self):
        return STAGE_LOSS[self.stage] if self.loss == 'auto' else self.loss

    def lr_at(self, epoch):
        '''
        :return: lr * lr_decay ^ floor(epoch / lr_decay_every)
        '''
        return self.base_lr * self.lr_decay ** (epoch // self.lr_decay_every)


def split_assignments(assignments):
    '''
    Route 'key=value' strings to the training or the model configuration.

    :return: (train assignments, model assignments)
    '''
    train, model = [], []
    for assignment in assignments:
        key = assignment.split('=', 1)[0].strip()
        if key in ModelConfig.defaults:
            model.append(assignment)
        elif key in TrainConfig.defaults:
            train.append(assignment)
        else:
            raise InvalidArgument('unknown configuration key %r' % key)
    return train, model


def read_lines(path):
    '''
    :return: the assignments of a configuration file (comments and blank lines dropped)
    '''
    with open(path, 'r') as f:
        lines = [line.strip() for line in f]
    return [line for line in lines if line and not line.startswith('#')]


def load_configs(path=None, overrides=()):
    '''
    :param path: configuration file (default: None, defaults only)
    :param overrides: 'key=value' strings applied after the file
    :return: (TrainConfig, ModelConfig)
    '''
    assignments = (read_lines(path) if path else []) + list(overrides)
    train, model = split_assignments(assignments)
    return TrainConfig().with_overrides(train), ModelConfig().with_overrides(model)
