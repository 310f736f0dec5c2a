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
Ablation experiments reproducing, at desk scale, the direction of each
comparison the method is built on.
'''
from udepth.experiments.result import ExperimentResult, epochs_to_reach
from udepth.experiments.ablations import ExperimentSettings, Experiment, EXPERIMENTS
from udepth.experiments.ablations import LossAblation, ResidualAblation, NsSweep, ResidualInputAblation
from udepth.experiments.ablations import loss_ablation, residual_ablation, ns_sweep, residual_input_ablation
from udepth.experiments.ablations import top_uncertainty_report, block_gradient_norms, TOP_FRACTION
