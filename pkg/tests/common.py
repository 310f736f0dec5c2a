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
Shared helpers of the udepth tests
'''
import os
import shutil
import tempfile
import unittest
import logging
import numpy as np

os.environ.setdefault('UDEPTH_NO_LOGFILE', '1')

from udepth.grid import GuideImage, SparseDepthGrid, DepthGrid
from udepth.lidarsim import Dataset, ScenePreset, generate_frame


#: long-running direction experiments only run with UDEPTH_ACCEPTANCE=1
ACCEPTANCE = os.environ.get('UDEPTH_ACCEPTANCE') == '1'

#: frame size of the fast tests, divisible by the 16 pixels a 2-level model needs
SMALL_SIZE = (16, 48)

test_logger = None


def get_test_logger():
    global test_logger
    if test_logger is None:
        logger = logging.getLogger('unit_test_logs')
        logger.setLevel(logging.DEBUG)
        formatter = logging.Formatter(
            '[%(asctime)s] [%(levelname)s] -> %(message)s'
        )
        if not os.path.exists('logs'):
            os.mkdir('logs')
        handler = logging.FileHandler('logs/test.log', mode='w')
        handler.setFormatter(formatter)
        handler.setLevel(logging.DEBUG)
        logger.addHandler(handler)
        test_logger = logger
    return test_logger


def acceptance(func):
    return unittest.skipUnless(ACCEPTANCE, 'set UDEPTH_ACCEPTANCE=1 to run')(func)


def random_sparse(rng, shape, density=0.5, low=1.0, high=60.0):
    valid = rng.random(shape) < density
    valid.reshape(-1)[0] = True
    return SparseDepthGrid.from_masked(rng.uniform(low, high, shape), valid)


def random_guide(rng, shape, channels=1):
    return GuideImage(rng.random((channels,) + tuple(shape)))


def random_depth(rng, shape, low=1.0, high=60.0):
    return DepthGrid(rng.uniform(low, high, shape))


def small_preset(size=SMALL_SIZE, **kwargs):
    return ScenePreset(size[0], size[1], **kwargs)


def small_dataset(n_frames=2, seed=0, size=SMALL_SIZE):
    preset = small_preset(size)
    return Dataset([generate_frame(preset, seed, i) for i in range(n_frames)])


class BaseTestCase(unittest.TestCase):

    def setUp(self):
        self.logger = get_test_logger()
        self.logger.debug('TESTING METHOD: %s', self._testMethodName)
        self.rng = np.random.default_rng(1234)
        self._tmp_dirs = []

    def tearDown(self):
        for path in self._tmp_dirs:
            shutil.rmtree(path, ignore_errors=True)

    def mkdtemp(self):
        path = tempfile.mkdtemp(prefix='udepth_test_')
        self._tmp_dirs.append(path)
        return path

    def assertArrayEqual(self, first, second):
        first, second = np.asarray(first), np.asarray(second)
        self.assertEqual(first.shape, second.shape)
        self.assertTrue(np.array_equal(first, second), '%s != %s' % (first, second))

    def assertArrayAlmostEqual(self, first, second, tol=1e-12):
        first, second = np.asarray(first, dtype=np.float64), np.asarray(second, dtype=np.float64)
        self.assertEqual(first.shape, second.shape)
        self.assertLessEqual(float(np.max(np.abs(first - second), initial=0.0)), tol)
