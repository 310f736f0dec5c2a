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
Randomised street-like scenes and the preset bundling every
configuration a dataset is generated with.
'''
from udepth.core import kassert, make_rng
from udepth.lidarsim.scene import Camera, Scene, GroundPlane, Wall, Box, Pole
from udepth.lidarsim.scan import ScanConfig, CorruptionConfig

#: default desk-scale frame size, KITTI-like aspect and divisible by 2^3
DEFAULT_SIZE = (64, 192)


class ScenePreset(object):
    '''
    Camera, scanner and ground-truth corruption settings of a dataset.
    '''

    def __init__(self, height=DEFAULT_SIZE[0], width=DEFAULT_SIZE[1], scan=None, corruption=None):
        '''
        :param height: frame height [pixels]
        :param width: frame width [pixels]
        :param scan: :class:`~udepth.lidarsim.scan.ScanConfig` (default: ScanConfig())
        :param corruption: :class:`~udepth.lidarsim.scan.CorruptionConfig` (default: CorruptionConfig())
        '''
        self.camera = Camera(height, width)
        self.scan = scan if scan is not None else ScanConfig()
        self.corruption = corruption if corruption is not None else CorruptionConfig()
        kassert.is_of_types(self.scan, ScanConfig)
        kassert.is_of_types(self.corruption, CorruptionConfig)

    def to_items(self):
        '''
        :return: list of (key, value) pairs echoed into the dataset manifest
        '''
        return self.camera.to_items() + self.scan.to_items() + self.corruption.to_items()


def random_scene(camera, seed, frame=0):
    '''
    A ground plane, a back wall and a random set of boxes and poles.
    Every pixel ray hits something.

    :type camera: :class:`~udepth.lidarsim.scene.Camera`
    :param seed: global seed
    :param frame: frame counter of the random stream
    :rtype: :class:`~udepth.lidarsim.scene.Scene`
    '''
    rng = make_rng(seed, 'scene', frame)
    ground_level = -rng.uniform(1.4, 1.8)
    primitives = [
        GroundPlane(ground_level, albedo=rng.uniform(0.3, 0.5)),
        Wall(rng.uniform(35.0, 60.0), albedo=rng.uniform(0.5, 0.9)),
    ]
    for _ in range(rng.integers(2, 6)):
        z0 = rng.uniform(4.0, 30.0)
        x0 = rng.uniform(-12.0, 10.0)
        width = rng.uniform(1.0, 4.0)
        depth = rng.uniform(1.0, 5.0)
        height = rng.uniform(0.8, 4.0)
        primitives.append(Box(
            (x0, ground_level, z0), (x0 + width, ground_level + height, z0 + depth),
            albedo=rng.uniform(0.4, 1.0)))
    for _ in range(rng.integers(1, 4)):
        z = rng.uniform(5.0, 30.0)
        primitives.append(Pole(
            rng.uniform(-8.0, 8.0), z, rng.uniform(0.1, 0.3),
            ground_level, ground_level + rng.uniform(3.0, 6.0),
            albedo=rng.uniform(0.6, 1.0)))
    return Scene(camera, primitives)
