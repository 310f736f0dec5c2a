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
Networks of both training steps, their configuration and checkpoints.
'''
from udepth.model.config import ModelConfig, RESIDUAL_INPUTS
from udepth.model.networks import Network, CompletionBlock, JointModel, ResidualNet, NETWORKS
from udepth.model.networks import forward_block, forward_joint, forward_residual, compose_final, init_params
from udepth.model.networks import DEPTH_FLOOR, S_BOUND
from udepth.model.store import save_model, load_model, Prediction, Pipeline, params_equal
