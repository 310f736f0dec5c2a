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
Depth and guide grid types.

All grids are immutable value objects: the arrays they hold are copied on
construction and flagged read-only, so they can be shared between threads.
Invalid pixels of a sparse grid are encoded as depth 0 together with an
explicit boolean mask (the KITTI convention of 0 = missing).
'''
import numpy as np
from udepth.core import InvalidArgument, kassert


def _frozen(array, dtype=np.float64):
    arr = np.array(array, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


def _check_2d(arr, name):
    if arr.ndim != 2:
        raise InvalidArgument('%s must be a 2-d (H, W) array, got shape %s' % (name, arr.shape))
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidArgument('%s must have positive dimensions, got %s' % (name, arr.shape))


class DepthGrid(object):
    '''
    Dense H x W depth image in meters.
    '''

    def __init__(self, depth):
        '''
        :param depth: (H, W) array of finite, non-negative depths (meters)
        '''
        self.depth = _frozen(depth)
        _check_2d(self.depth, 'depth')
        if not np.all(np.isfinite(self.depth)):
            raise InvalidArgument('depth grid has non-finite entries')
        if np.any(self.depth < 0):
            raise InvalidArgument('depth grid has negative entries')

    @property
    def height(self):
        return self.depth.shape[0]

    @property
    def width(self):
        return self.depth.shape[1]

    @property
    def shape(self):
        return self.depth.shape

    def to_sparse(self):
        '''
        :return: a :class:`SparseDepthGrid` valid wherever depth > 0
        '''
        return SparseDepthGrid(self.depth)

    def __repr__(self):
        return 'DepthGrid(%dx%d)' % self.shape


class SparseDepthGrid(object):
    '''
    H x W depth samples (meters) with a validity mask.
    depth > 0 wherever valid, depth == 0 wherever not.
    '''

    def __init__(self, depth, valid=None):
        '''
        :param depth: (H, W) array of depths, 0 at missing pixels
        :param valid: (H, W) boolean mask (default: depth > 0)
        '''
        self.depth = _frozen(depth)
        _check_2d(self.depth, 'depth')
        if valid is None:
            valid = self.depth > 0
        self.valid = _frozen(valid, dtype=bool)
        kassert.same_shape(self.depth, self.valid)
        if not np.all(np.isfinite(self.depth)):
            raise InvalidArgument('sparse grid has non-finite entries')
        if np.any(self.depth[self.valid] <= 0):
            raise InvalidArgument('valid pixels must have a positive depth')
        if np.any(self.depth[~self.valid] != 0):
            raise InvalidArgument('invalid pixels must have depth 0')

    @classmethod
    def from_masked(cls, depth, valid):
        '''
        Build a grid from arbitrary depth values and a mask,
        zeroing the depth of the masked-out pixels.

        :param depth: (H, W) depths
        :param valid: (H, W) boolean mask
        '''
        valid = np.asarray(valid, dtype=bool)
        return cls(np.where(valid, depth, 0.0), valid)

    @property
    def height(self):
        return self.depth.shape[0]

    @property
    def width(self):
        return self.depth.shape[1]

    @property
    def shape(self):
        return self.depth.shape

    def validity_fraction(self):
        '''
        :return: fraction of valid pixels, in [0, 1]
        '''
        return float(np.count_nonzero(self.valid)) / self.valid.size

    def __repr__(self):
        return 'SparseDepthGrid(%dx%d, %.2f%% valid)' % (self.height, self.width, 100 * self.validity_fraction())


class LogVarGrid(object):
    '''
    Per-pixel log-variance s = 2 log(sigma), so sigma = exp(s / 2).
    '''

    def __init__(self, s):
        '''
        :param s: (H, W) array of finite log-variances
        '''
        self.s = _frozen(s)
        _check_2d(self.s, 's')
        if not np.all(np.isfinite(self.s)):
            raise InvalidArgument('log-variance grid has non-finite entries')

    @property
    def height(self):
        return self.s.shape[0]

    @property
    def width(self):
        return self.s.shape[1]

    @property
    def shape(self):
        return self.s.shape

    @property
    def sigma(self):
        '''
        :return: per-pixel standard deviation exp(s / 2)
        '''
        return np.exp(self.s / 2.0)

    def __repr__(self):
        return 'LogVarGrid(%dx%d)' % self.shape


class GuideImage(object):
    '''
    Guide (color or gray) image with intensities in [0, 1],
    stored as a (C, H, W) array with C in {1, 3}.
    '''

    def __init__(self, values):
        '''
        :param values: (H, W) or (C, H, W) array of intensities in [0, 1]
        '''
        values = np.asarray(values, dtype=np.float64)
        if values.ndim == 2:
            values = values[np.newaxis]
        if values.ndim != 3 or values.shape[0] not in (1, 3):
            raise InvalidArgument('guide image must be (H, W) or (C, H, W) with C in {1, 3}, got %s' % (values.shape,))
        _check_2d(values[0], 'guide')
        if not np.all(np.isfinite(values)) or np.any(values < 0) or np.any(values > 1):
            raise InvalidArgument('guide intensities must be in [0, 1]')
        self.values = _frozen(values)

    @property
    def channels(self):
        return self.values.shape[0]

    @property
    def height(self):
        return self.values.shape[1]

    @property
    def width(self):
        return self.values.shape[2]

    @property
    def shape(self):
        return self.values.shape[1:]

    def __repr__(self):
        return 'GuideImage(%dx%d, %d channels)' % (self.height, self.width, self.channels)


class ScalePyramid(object):
    '''
    Ordered (guide, sparse) pairs from the coarsest level (k = K - 1)
    to the finest (k = 0), with a factor of 2 between levels.
    '''

    factor = 2

    def __init__(self, levels):
        '''
        :param levels: list of (GuideImage, SparseDepthGrid), coarse to fine
        '''
        if not levels:
            raise InvalidArgument('a pyramid needs at least one level')
        for guide, sparse in levels:
            kassert.is_of_types(guide, GuideImage)
            kassert.is_of_types(sparse, SparseDepthGrid)
            if guide.shape != sparse.shape:
                raise InvalidArgument('guide %s and sparse %s dims differ' % (guide.shape, sparse.shape))
        self.levels = tuple(levels)

    def __len__(self):
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)

    @property
    def num_levels(self):
        return len(self.levels)

    def level(self, k):
        '''
        :param k: scale index, 0 is the finest (original) level
        :return: (GuideImage, SparseDepthGrid) of scale k
        '''
        kassert.in_range(k, 0, self.num_levels - 1, 'k')
        return self.levels[self.num_levels - 1 - k]

    def finest(self):
        return self.levels[-1]

    def coarsest(self):
        return self.levels[0]


class ResidualGrid(object):
    '''
    Signed per-pixel depth correction (meters) of the refinement step.
    '''

    def __init__(self, residual):
        '''
        :param residual: (H, W) array of finite corrections
        '''
        self.residual = _frozen(residual)
        _check_2d(self.residual, 'residual')
        if not np.all(np.isfinite(self.residual)):
            raise InvalidArgument('residual grid has non-finite entries')

    @property
    def height(self):
        return self.residual.shape[0]

    @property
    def width(self):
        return self.residual.shape[1]

    @property
    def shape(self):
        return self.residual.shape

    def __repr__(self):
        return 'ResidualGrid(%dx%d)' % self.shape
