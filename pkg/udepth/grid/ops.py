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
Resampling operations on grids and the multiscale pyramid construction.

Sparse depth is downsampled with a max over the valid pixels of each window,
guide images with an area mean, and dense depth is upsampled bilinearly
with the align-corners-false convention.
'''
import numpy as np
from udepth.core import InvalidArgument, kassert
from udepth.grid.types import DepthGrid, GuideImage, SparseDepthGrid, ScalePyramid

MAX_PYRAMID_LEVELS = 4


def _ceil_div(a, b):
    return -(-a // b)


def _pad_to_multiple(arr, factor, value=0):
    '''
    pad the last two axes of arr up to a multiple of factor
    '''
    height, width = arr.shape[-2:]
    pad_h = _ceil_div(height, factor) * factor - height
    pad_w = _ceil_div(width, factor) * factor - width
    if pad_h == 0 and pad_w == 0:
        return arr
    pads = [(0, 0)] * (arr.ndim - 2) + [(0, pad_h), (0, pad_w)]
    return np.pad(arr, pads, mode='constant', constant_values=value)


def _windows(arr, factor):
    '''
    :return: view of arr (..., H, W) reshaped to (..., H/f, f, W/f, f)
    '''
    height, width = arr.shape[-2:]
    return arr.reshape(arr.shape[:-2] + (height // factor, factor, width // factor, factor))


def downsample_sparse_max(grid, factor):
    '''
    Max-pool a sparse depth grid, ignoring invalid pixels.
    An output pixel is invalid iff its window holds no valid pixel.

    :type grid: :class:`~udepth.grid.types.SparseDepthGrid`
    :param factor: window size, a power of 2
    :rtype: :class:`~udepth.grid.types.SparseDepthGrid`
    '''
    kassert.power_of_two(factor)
    if factor == 1:
        return grid
    valid = _windows(_pad_to_multiple(grid.valid, factor, False), factor)
    depth = _windows(_pad_to_multiple(grid.depth, factor, 0.0), factor)
    masked = np.where(valid, depth, -np.inf)
    out_depth = masked.max(axis=(-3, -1))
    out_valid = valid.any(axis=(-3, -1))
    return SparseDepthGrid(np.where(out_valid, out_depth, 0.0), out_valid)


def downsample_guide(guide, factor):
    '''
    Area interpolation: each output pixel is the mean of its window
    (windows cut by the image border average over their inside pixels).

    :type guide: :class:`~udepth.grid.types.GuideImage`
    :param factor: window size, a power of 2
    :rtype: :class:`~udepth.grid.types.GuideImage`
    '''
    kassert.power_of_two(factor)
    if factor == 1:
        return guide
    ones = np.ones(guide.shape)
    sums = _windows(_pad_to_multiple(guide.values, factor), factor).sum(axis=(-3, -1))
    counts = _windows(_pad_to_multiple(ones, factor), factor).sum(axis=(-3, -1))
    return GuideImage(np.clip(sums / counts, 0.0, 1.0))


def bilinear_matrix(size, factor):
    '''
    Interpolation matrix A (size * factor, size) of the 1-d bilinear
    upsampling with the align-corners-false convention: output sample j
    reads the input at (j + 0.5) / factor - 0.5, clamped to the border.

    :param size: input length
    :param factor: integer upsampling factor
    :rtype: numpy.ndarray
    '''
    out_size = size * factor
    src = (np.arange(out_size) + 0.5) / factor - 0.5
    src = np.clip(src, 0, size - 1)
    lo = np.floor(src).astype(int)
    hi = np.minimum(lo + 1, size - 1)
    w_hi = src - lo
    matrix = np.zeros((out_size, size))
    rows = np.arange(out_size)
    np.add.at(matrix, (rows, lo), 1.0 - w_hi)
    np.add.at(matrix, (rows, hi), w_hi)
    return matrix


def upsample_bilinear(grid, factor):
    '''
    Bilinear upsampling (align corners false) of a dense depth grid.

    :type grid: :class:`~udepth.grid.types.DepthGrid`
    :param factor: upsampling factor, a power of 2
    :rtype: :class:`~udepth.grid.types.DepthGrid`
    '''
    kassert.power_of_two(factor)
    if factor == 1:
        return grid
    rows = bilinear_matrix(grid.height, factor)
    cols = bilinear_matrix(grid.width, factor)
    out = rows.dot(grid.depth).dot(cols.T)
    # interpolation weights are convex, this only removes rounding overshoot
    out = np.clip(out, grid.depth.min(), grid.depth.max())
    return DepthGrid(out)


def build_pyramid(guide, sparse, levels):
    '''
    Build the multiscale inputs: level k is the guide downsampled by area
    mean and the sparse depth max-pooled, both by a factor of 2^k.

    :type guide: :class:`~udepth.grid.types.GuideImage`
    :type sparse: :class:`~udepth.grid.types.SparseDepthGrid`
    :param levels: number of levels (1 to 4)
    :rtype: :class:`~udepth.grid.types.ScalePyramid` ordered coarse to fine
    '''
    kassert.is_int(levels)
    kassert.in_range(levels, 1, MAX_PYRAMID_LEVELS, 'levels')
    if guide.shape != sparse.shape:
        raise InvalidArgument('guide %s and sparse %s dims differ' % (guide.shape, sparse.shape))
    divisor = 2 ** (levels - 1)
    if sparse.height % divisor or sparse.width % divisor:
        raise InvalidArgument('dims %s are not divisible by %d' % (sparse.shape, divisor))
    pairs = []
    for k in reversed(range(levels)):
        factor = 2 ** k
        pairs.append((downsample_guide(guide, factor), downsample_sparse_max(sparse, factor)))
    return ScalePyramid(pairs)


def count_valid(grid):
    '''
    :type grid: :class:`~udepth.grid.types.SparseDepthGrid`
    :return: number of valid pixels
    '''
    return int(np.count_nonzero(grid.valid))
