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
udepth - uncertainty-driven depth completion toolkit.

The package is split the following way:

:grid: depth / guide grid types, pyramids and the PGM/PPM codec
:autodiff: small reverse-mode tensor engine
:losses: uncertainty-driven and residual loss family
:metrics: KITTI-style evaluation metrics
:lidarsim: synthetic LiDAR scene / scan / ground truth simulator
:model: multiscale joint prediction and residual refinement networks
:trainer: two-stage training and evaluation runs
:experiments: ablation harness
'''
__version__ = '0.1.0'
