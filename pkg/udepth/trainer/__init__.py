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
Two-step training, the optimiser, configuration and training logs.
'''
from udepth.trainer.optim import OptimState, adam_step
from udepth.trainer.config import TrainConfig, load_configs, split_assignments
from udepth.trainer.log import TrainLog, EpochRecord, COLUMNS
from udepth.trainer.trainer import Trainer, Stage1Trainer, Stage2Trainer
from udepth.trainer.trainer import train_stage1, train_stage2, eval_run
