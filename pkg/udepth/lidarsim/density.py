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
Sampling-density diagnostics of sparse depth grids.
'''
import numpy as np
from udepth.core import InvalidArgument, kassert


def _box_sum(arr, window):
    '''
    Sum over a window x window neighbourhood (clipped at the borders),
    via a 2-d cumulative sum.
    '''
    half = window // 2
    padded = np.pad(arr, ((half + 1, half), (half + 1, half)), mode='constant')
    cum = padded.cumsum(axis=0).cumsum(axis=1)
    return (cum[window:, window:] - cum[:-window, window:] - cum[window:, :-window] + cum[:-window, :-window])


def density_map(sparse, window=9):
    '''
    Local sampling density: the fraction of valid pixels in the odd-sized
    window centred at every pixel (only in-image pixels are counted).

    :param sparse: SparseDepthGrid
    :param window: odd window size (default: 9)
    :return: (H, W) array in [0, 1]
    '''
    kassert.is_int(window)
    if window < 1 or window % 2 == 0:
        raise InvalidArgument('window must be a positive odd integer, got %s' % window)
    valid = np.asarray(sparse.valid, dtype=np.float64)
    counts = _box_sum(valid, window)
    area = _box_sum(np.ones(valid.shape), window)
    return counts / area


def region_density(sparse, region):
    '''
    :param sparse: SparseDepthGrid
    :param region: boolean mask of the region
    :return: valid pixels per region pixel, in [0, 1]
    '''
    region = np.asarray(region, dtype=bool)
    kassert.same_shape(region, sparse.valid)
    size = np.count_nonzero(region)
    if size == 0:
        raise InvalidArgument('empty region')
    return float(np.count_nonzero(sparse.valid & region)) / size
