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
LiDAR scan simulation and semi-dense ground-truth corruption.

The scanner sits at the camera centre and fires its beams on a fixed
(elevation, azimuth) lattice. Each lattice point that lands inside the
image samples the clean depth of its pixel. A return is recorded with
probability (1 - dropout) * exp(-range / range_falloff), so far surfaces
are sampled more sparsely than near ones.
'''
import numpy as np
from udepth.core import InvalidArgument, kassert, make_rng
from udepth.grid import SparseDepthGrid
from udepth.lidarsim.scene import Camera, FAR_DEPTH


class ScanConfig(object):
    '''
    Scanner lattice and return model.
    '''

    def __init__(self, n_beams=16, azimuth_step=0.02, vertical_fov=(-0.35, 0.05), dropout=0.1, range_falloff=40.0):
        '''
        :param n_beams: number of vertical channels (>= 1)
        :param azimuth_step: angular step between firings [rad] (> 0)
        :param vertical_fov: (min, max) beam elevation [rad]
        :param dropout: probability of losing a return, in [0, 1)
        :param range_falloff: range constant of the return probability [m], 0 disables the falloff
        '''
        kassert.is_int(n_beams)
        kassert.positive(n_beams, 'n_beams')
        kassert.positive(azimuth_step, 'azimuth_step')
        low, high = (float(v) for v in vertical_fov)
        if not (-np.pi / 2 < low <= high < np.pi / 2):
            raise InvalidArgument('vertical_fov must be increasing and within (-pi/2, pi/2), got %s' % (vertical_fov,))
        if not (0.0 <= dropout < 1.0):
            raise InvalidArgument('dropout must be in [0, 1), got %s' % dropout)
        if range_falloff < 0:
            raise InvalidArgument('range_falloff must be >= 0, got %s' % range_falloff)
        self.n_beams = int(n_beams)
        self.azimuth_step = float(azimuth_step)
        self.vertical_fov = (low, high)
        self.dropout = float(dropout)
        self.range_falloff = float(range_falloff)

    def elevations(self):
        if self.n_beams == 1:
            return np.array([self.vertical_fov[0]])
        return np.linspace(self.vertical_fov[0], self.vertical_fov[1], self.n_beams)

    def return_probability(self, distance):
        '''
        :param distance: array of ranges [m]
        :return: probability that a firing at that range is recorded
        '''
        prob = np.full(np.shape(distance), 1.0 - self.dropout)
        if self.range_falloff > 0:
            prob = prob * np.exp(-np.asarray(distance) / self.range_falloff)
        return prob

    def to_items(self):
        return [('scan.n_beams', self.n_beams), ('scan.azimuth_step', self.azimuth_step),
                ('scan.vertical_fov', '%r,%r' % self.vertical_fov), ('scan.dropout', self.dropout),
                ('scan.range_falloff', self.range_falloff)]


class CorruptionConfig(object):
    '''
    Outlier model of the semi-dense ground truth.
    '''

    def __init__(self, outlier_rate=0.1, outlier_shift=3, gt_density=0.3):
        '''
        :param outlier_rate: probability that a kept pixel is replaced by a misprojected depth, in [0, 1)
        :param outlier_shift: maximal misprojection offset [pixels] (>= 1)
        :param gt_density: probability of keeping a pixel, in (0, 1]
        '''
        if not (0.0 <= outlier_rate < 1.0):
            raise InvalidArgument('outlier_rate must be in [0, 1), got %s' % outlier_rate)
        kassert.is_int(outlier_shift)
        if outlier_shift < 1:
            raise InvalidArgument('outlier_shift must be >= 1, got %s' % outlier_shift)
        if not (0.0 < gt_density <= 1.0):
            raise InvalidArgument('gt_density must be in (0, 1], got %s' % gt_density)
        self.outlier_rate = float(outlier_rate)
        self.outlier_shift = int(outlier_shift)
        self.gt_density = float(gt_density)

    def offsets(self):
        '''
        :return: (K, 2) integer (row, col) offsets o with 0 < |o| <= outlier_shift
        '''
        span = np.arange(-self.outlier_shift, self.outlier_shift + 1)
        rows, cols = np.meshgrid(span, span, indexing='ij')
        norm2 = rows * rows + cols * cols
        keep = (norm2 > 0) & (norm2 <= self.outlier_shift ** 2)
        return np.stack([rows[keep], cols[keep]], axis=1)

    def to_items(self):
        return [('corruption.outlier_rate', self.outlier_rate),
                ('corruption.outlier_shift', self.outlier_shift),
                ('corruption.gt_density', self.gt_density)]


def lattice_pixels(camera, cfg):
    '''
    Pixels hit by the scan lattice, without duplicates.

    :return: (rows, cols, directions) in row-major pixel order
    '''
    half_fov = np.arctan2(max(camera.cx, camera.width - camera.cx), camera.focal)
    count = int(np.floor(half_fov / cfg.azimuth_step))
    azimuths = np.arange(-count, count + 1) * cfg.azimuth_step
    elev, azim = np.meshgrid(cfg.elevations(), azimuths, indexing='ij')
    dirs = np.stack([np.cos(elev) * np.sin(azim), np.sin(elev), np.cos(elev) * np.cos(azim)], axis=-1).reshape(-1, 3)
    rows, cols = camera.project(dirs)
    inside = (rows >= 0) & (rows < camera.height) & (cols >= 0) & (cols < camera.width)
    flat, first = np.unique(rows[inside] * camera.width + cols[inside], return_index=True)
    return flat // camera.width, flat % camera.width, dirs[inside][first]


def simulate_scan(gt, cfg, seed, frame=0, camera=None):
    '''
    Sample a clean depth image on the scanner lattice.

    Every valid sample equals the clean depth of its pixel. Pixels on the
    far plane (no hit) are never recorded.

    :param gt: clean depth (DepthGrid)
    :type cfg: :class:`ScanConfig`
    :param seed: global seed
    :param frame: frame counter of the random stream (default: 0)
    :param camera: camera the depth was rendered with (default: :class:`Camera` for the grid size)
    :rtype: :class:`~udepth.grid.types.SparseDepthGrid`
    '''
    if camera is None:
        camera = Camera(gt.height, gt.width)
    if camera.shape != gt.shape:
        raise InvalidArgument('camera %s does not match depth %s' % (camera.shape, gt.shape))
    rows, cols, dirs = lattice_pixels(camera, cfg)
    depth = gt.depth[rows, cols]
    # range along the firing direction, z-depth divided by the z component
    distance = depth / dirs[:, 2]
    rng = make_rng(seed, 'scan', frame)
    draws = rng.random(rows.size)
    keep = (draws < cfg.return_probability(distance)) & (depth < FAR_DEPTH) & (depth > 0)
    out = np.zeros(gt.shape)
    out[rows[keep], cols[keep]] = depth[keep]
    return SparseDepthGrid(out)


def corrupt_gt(gt, cfg, seed, frame=0):
    '''
    Semi-dense ground truth with accumulated misprojection outliers.

    Each pixel is kept with probability gt_density; a kept pixel becomes an
    outlier with probability outlier_rate and then carries the clean depth
    found at a uniformly drawn offset (clipped to the image).
    Far-plane pixels are ground truth like any other, as in the clean depth.

    :param gt: clean depth (DepthGrid)
    :type cfg: :class:`CorruptionConfig`
    :param seed: global seed
    :param frame: frame counter of the random stream (default: 0)
    :rtype: :class:`~udepth.grid.types.SparseDepthGrid`
    '''
    rng = make_rng(seed, 'corrupt', frame)
    height, width = gt.shape
    keep = (rng.random(gt.shape) < cfg.gt_density) & (gt.depth > 0)
    outlier = keep & (rng.random(gt.shape) < cfg.outlier_rate)
    offsets = cfg.offsets()
    choice = offsets[rng.integers(0, len(offsets), size=gt.shape)]
    rows = np.clip(np.arange(height)[:, np.newaxis] + choice[..., 0], 0, height - 1)
    cols = np.clip(np.arange(width)[np.newaxis, :] + choice[..., 1], 0, width - 1)
    shifted = gt.depth[rows, cols]
    depth = np.where(outlier, shifted, gt.depth)
    return SparseDepthGrid.from_masked(depth, keep)
