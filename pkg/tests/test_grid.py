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
Tests for the grid types, resampling operations and the PNM codec
'''
import os
import numpy as np
from common import BaseTestCase
from udepth.core import InvalidArgument
from udepth.grid import DepthGrid, SparseDepthGrid, LogVarGrid, GuideImage, ResidualGrid
from udepth.grid import downsample_sparse_max, downsample_guide, upsample_bilinear
from udepth.grid import build_pyramid, count_valid, bilinear_matrix
from udepth.grid import pnm
from udepth.grid.colormap import colorize_depth, colorize_logvar, colorize_residual


class GridTypesTests(BaseTestCase):

    def testSparseDefaultMaskFromDepth(self):
        grid = SparseDepthGrid([[0.0, 2.0], [3.0, 0.0]])
        self.assertArrayEqual(grid.valid, [[False, True], [True, False]])
        self.assertEqual(grid.validity_fraction(), 0.5)

    def testSparseRejectsDepthAtInvalidPixel(self):
        with self.assertRaises(InvalidArgument):
            SparseDepthGrid([[1.0, 2.0]], [[True, False]])

    def testSparseRejectsZeroAtValidPixel(self):
        with self.assertRaises(InvalidArgument):
            SparseDepthGrid([[0.0, 2.0]], [[True, True]])

    def testFromMaskedZeroesMaskedOutPixels(self):
        grid = SparseDepthGrid.from_masked([[5.0, 7.0]], [[False, True]])
        self.assertArrayEqual(grid.depth, [[0.0, 7.0]])

    def testDepthRejectsNegative(self):
        with self.assertRaises(InvalidArgument):
            DepthGrid([[1.0, -0.5]])

    def testDepthRejectsNonFinite(self):
        with self.assertRaises(InvalidArgument):
            DepthGrid([[1.0, np.inf]])

    def testGridsAreReadOnly(self):
        grid = DepthGrid(np.ones((2, 2)))
        with self.assertRaises(ValueError):
            grid.depth[0, 0] = 3.0

    def testGridCopiesItsInput(self):
        values = np.ones((2, 2))
        grid = DepthGrid(values)
        values[0, 0] = 9.0
        self.assertEqual(grid.depth[0, 0], 1.0)

    def testLogVarSigma(self):
        grid = LogVarGrid([[0.0, 2 * np.log(3.0)]])
        self.assertArrayAlmostEqual(grid.sigma, [[1.0, 3.0]])

    def testGuideAcceptsGrayAndColor(self):
        self.assertEqual(GuideImage(np.zeros((4, 6))).channels, 1)
        color = GuideImage(np.zeros((3, 4, 6)))
        self.assertEqual(color.channels, 3)
        self.assertEqual(color.shape, (4, 6))

    def testGuideRejectsOutOfRange(self):
        with self.assertRaises(InvalidArgument):
            GuideImage([[0.5, 1.5]])

    def testGuideRejectsTwoChannels(self):
        with self.assertRaises(InvalidArgument):
            GuideImage(np.zeros((2, 4, 4)))

    def testResidualMayBeNegative(self):
        grid = ResidualGrid([[-1.0, 2.0]])
        self.assertEqual(grid.shape, (1, 2))


class GridOpsTests(BaseTestCase):

    def testSparseMaxOverValidSet(self):
        grid = SparseDepthGrid([[1.0, 3.0], [0.0, 2.0]])
        out = downsample_sparse_max(grid, 2)
        self.assertArrayEqual(out.depth, [[3.0]])
        self.assertArrayEqual(out.valid, [[True]])

    def testSparseMaxAllInvalidWindow(self):
        out = downsample_sparse_max(SparseDepthGrid(np.zeros((2, 2))), 2)
        self.assertArrayEqual(out.depth, [[0.0]])
        self.assertArrayEqual(out.valid, [[False]])

    def testSparseMaxConstant(self):
        grid = SparseDepthGrid(np.full((8, 8), 5.0))
        for factor in (1, 2, 4, 8):
            out = downsample_sparse_max(grid, factor)
            self.assertTrue(np.all(out.depth == 5.0))
            self.assertTrue(np.all(out.valid))

    def testSparseMaxMatchesBruteForce(self):
        grid = SparseDepthGrid.from_masked(self.rng.uniform(1, 50, (8, 12)), self.rng.random((8, 12)) < 0.3)
        out = downsample_sparse_max(grid, 4)
        for i in range(2):
            for j in range(3):
                window = grid.depth[4 * i:4 * i + 4, 4 * j:4 * j + 4]
                mask = grid.valid[4 * i:4 * i + 4, 4 * j:4 * j + 4]
                self.assertEqual(out.valid[i, j], mask.any())
                self.assertEqual(out.depth[i, j], window[mask].max() if mask.any() else 0.0)

    def testNonPowerOfTwoFactor(self):
        grid = SparseDepthGrid(np.ones((6, 6)))
        with self.assertRaises(InvalidArgument):
            downsample_sparse_max(grid, 3)
        with self.assertRaises(InvalidArgument):
            downsample_guide(GuideImage(np.ones((6, 6))), 3)
        with self.assertRaises(InvalidArgument):
            upsample_bilinear(DepthGrid(np.ones((2, 2))), 3)

    def testGuideMeanOfWindow(self):
        out = downsample_guide(GuideImage([[0.0, 1.0], [1.0, 0.0]]), 2)
        self.assertArrayAlmostEqual(out.values, [[[0.5]]])

    def testGuideConstant(self):
        out = downsample_guide(GuideImage(np.full((8, 8), 0.3)), 4)
        self.assertArrayAlmostEqual(out.values, np.full((1, 2, 2), 0.3))

    def testGuideRampBlockMeans(self):
        ramp = np.arange(16, dtype=np.float64).reshape(4, 4) / 15.0
        out = downsample_guide(GuideImage(ramp), 2)
        expected = [[ramp[:2, :2].mean(), ramp[:2, 2:].mean()], [ramp[2:, :2].mean(), ramp[2:, 2:].mean()]]
        self.assertArrayAlmostEqual(out.values[0], expected)

    def testUpsampleConstant(self):
        out = upsample_bilinear(DepthGrid(np.full((3, 5), 7.0)), 2)
        self.assertEqual(out.shape, (6, 10))
        self.assertArrayAlmostEqual(out.depth, np.full((6, 10), 7.0))

    def testUpsampleAlignCornersFalse(self):
        out = upsample_bilinear(DepthGrid([[0.0, 1.0]]), 2)
        self.assertEqual(out.shape, (2, 4))
        for row in out.depth:
            self.assertArrayAlmostEqual(row, [0.0, 0.25, 0.75, 1.0])

    def testUpsampleIdentity(self):
        grid = DepthGrid(self.rng.uniform(1, 10, (3, 4)))
        self.assertArrayEqual(upsample_bilinear(grid, 1).depth, grid.depth)

    def testUpsampleStaysInRange(self):
        for _ in range(20):
            grid = DepthGrid(self.rng.uniform(0, 80, (4, 6)))
            out = upsample_bilinear(grid, 4)
            self.assertGreaterEqual(out.depth.min(), grid.depth.min())
            self.assertLessEqual(out.depth.max(), grid.depth.max())

    def testBilinearRowsAreConvex(self):
        matrix = bilinear_matrix(5, 4)
        self.assertEqual(matrix.shape, (20, 5))
        self.assertArrayAlmostEqual(matrix.sum(axis=1), np.ones(20))
        self.assertGreaterEqual(matrix.min(), 0.0)

    def testPyramidSingleLevel(self):
        guide = GuideImage(self.rng.random((8, 8)))
        sparse = SparseDepthGrid(np.full((8, 8), 4.0))
        pyramid = build_pyramid(guide, sparse, 1)
        self.assertEqual(len(pyramid), 1)
        out_guide, out_sparse = pyramid.finest()
        self.assertArrayEqual(out_guide.values, guide.values)
        self.assertArrayEqual(out_sparse.depth, sparse.depth)

    def testPyramidOrderingAndSizes(self):
        guide = GuideImage(np.zeros((352, 1216)))
        sparse = SparseDepthGrid(np.zeros((352, 1216)))
        pyramid = build_pyramid(guide, sparse, 4)
        self.assertEqual(pyramid.coarsest()[1].shape, (44, 152))
        self.assertEqual(pyramid.finest()[1].shape, (352, 1216))
        self.assertEqual(pyramid.level(3)[1].shape, (44, 152))
        self.assertEqual(pyramid.level(1)[1].shape, (176, 608))

    def testPyramidConstantLevels(self):
        pyramid = build_pyramid(GuideImage(np.full((8, 8), 0.25)), SparseDepthGrid(np.full((8, 8), 3.0)), 2)
        for guide, sparse in pyramid:
            self.assertArrayAlmostEqual(guide.values, np.full(guide.values.shape, 0.25))
            self.assertTrue(np.all(sparse.depth == 3.0))

    def testPyramidIndivisibleDims(self):
        with self.assertRaises(InvalidArgument):
            build_pyramid(GuideImage(np.zeros((6, 8))), SparseDepthGrid(np.zeros((6, 8))), 3)

    def testPyramidTooManyLevels(self):
        with self.assertRaises(InvalidArgument):
            build_pyramid(GuideImage(np.zeros((32, 32))), SparseDepthGrid(np.zeros((32, 32))), 5)

    def testCountValid(self):
        self.assertEqual(count_valid(SparseDepthGrid(np.ones((4, 4)))), 16)
        self.assertEqual(count_valid(SparseDepthGrid(np.zeros((4, 4)))), 0)
        checker = (np.indices((4, 4)).sum(axis=0) % 2).astype(np.float64)
        self.assertEqual(count_valid(SparseDepthGrid(checker)), 8)


class PnmTests(BaseTestCase):

    def testDepthRoundTripAtKittiResolution(self):
        path = os.path.join(self.mkdtemp(), 'sparse.pgm')
        depth = np.round(self.rng.uniform(1, 80, (5, 7)) * 256) / 256
        grid = SparseDepthGrid.from_masked(depth, self.rng.random((5, 7)) < 0.5)
        pnm.write_sparse(path, grid)
        loaded = pnm.read_sparse(path)
        self.assertArrayEqual(loaded.valid, grid.valid)
        self.assertArrayEqual(loaded.depth, grid.depth)

    def testDepthIs16BitBigEndian(self):
        data = pnm.encode_pnm(pnm.PnmImage(b'P5', pnm.DEPTH_MAXVAL, pnm.encode_depth_values([[1.0]], [[True]])))
        self.assertEqual(data, b'P5\n1 1\n65535\n\x01\x00')

    def testHeaderWithComment(self):
        image = pnm.decode_pnm(b'P5\n# made by hand\n2 1\n255\n\x00\xff')
        self.assertEqual(image.pixels.tolist(), [[0, 255]])

    def testTruncatedRaster(self):
        with self.assertRaises(InvalidArgument):
            pnm.decode_pnm(b'P5\n2 2\n255\n\x00')

    def testUnsupportedMagic(self):
        with self.assertRaises(InvalidArgument):
            pnm.decode_pnm(b'P2\n1 1\n255\n0')

    def testGuideRoundTrip(self):
        path = os.path.join(self.mkdtemp(), 'guide.ppm')
        values = self.rng.integers(0, 256, (3, 4, 5)) / 255.0
        pnm.write_guide(path, GuideImage(values))
        self.assertArrayAlmostEqual(pnm.read_guide(path).values, values)

    def testRgbRoundTrip(self):
        path = os.path.join(self.mkdtemp(), 'render.ppm')
        rgb = self.rng.integers(0, 256, (4, 6, 3)).astype(np.uint8)
        pnm.write_rgb(path, rgb)
        self.assertArrayEqual(pnm.read_rgb(path), rgb)


class ColormapTests(BaseTestCase):

    def testConstantDepthSingleColor(self):
        rgb = colorize_depth(np.full((4, 6), 12.0))
        self.assertEqual(rgb.shape, (4, 6, 3))
        self.assertEqual(len(set(map(tuple, rgb.reshape(-1, 3)))), 1)

    def testZeroResidualIsMidGray(self):
        rgb = colorize_residual(np.zeros((3, 3)))
        first = tuple(rgb[0, 0])
        self.assertEqual(first[0], first[1])
        self.assertEqual(first[1], first[2])
        self.assertTrue(120 <= first[0] <= 135)
        self.assertTrue(np.all(rgb == rgb[0, 0]))

    def testLogVarRangeClipped(self):
        rgb = colorize_logvar(np.array([[-50.0, -10.0, 10.0, 50.0]]))
        self.assertArrayEqual(rgb[0, 0], rgb[0, 1])
        self.assertArrayEqual(rgb[0, 2], rgb[0, 3])
