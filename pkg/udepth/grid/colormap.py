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
False-color renderings of depth, uncertainty and residual maps.

Ranges are fixed so renders of different runs are comparable:
depth over [0, 80] m (turbo), log-variance over [-10, 10] (turbo),
residual over a symmetric range with zero mapped to mid-gray.
'''
import numpy as np
from matplotlib import colormaps
from matplotlib.colors import LinearSegmentedColormap

DEPTH_RANGE = (0.0, 80.0)
LOGVAR_RANGE = (-10.0, 10.0)
RESIDUAL_RANGE = (-5.0, 5.0)

_RESIDUAL_CMAP = LinearSegmentedColormap.from_list(
    'udepth_residual', [(0.0, 0.0, 1.0), (0.5, 0.5, 0.5), (1.0, 0.0, 0.0)], N=255)


def _to_rgb(values, cmap, value_range):
    low, high = value_range
    normed = np.clip((np.asarray(values, dtype=np.float64) - low) / (high - low), 0.0, 1.0)
    rgba = cmap(normed)
    return np.rint(rgba[..., :3] * 255).astype(np.uint8)


def colorize_depth(depth):
    '''
    :param depth: (H, W) depth in meters
    :return: (H, W, 3) uint8 image
    '''
    return _to_rgb(depth, colormaps['turbo'], DEPTH_RANGE)


def colorize_logvar(s):
    '''
    :param s: (H, W) log-variance
    :return: (H, W, 3) uint8 image
    '''
    return _to_rgb(s, colormaps['turbo'], LOGVAR_RANGE)


def colorize_residual(residual):
    '''
    :param residual: (H, W) residual in meters, zero renders as mid-gray
    :return: (H, W, 3) uint8 image
    '''
    return _to_rgb(residual, _RESIDUAL_CMAP, RESIDUAL_RANGE)
