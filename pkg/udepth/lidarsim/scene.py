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
Parametric 3D scenes and their ray-cast rendering.

Coordinates are camera-centred: x to the right, y up, z forward (meters).
Rays are scaled so that their z component is 1, hence the ray parameter of
a hit is directly its z-depth.
'''
import numpy as np
from udepth.core import InvalidArgument, kassert
from udepth.grid import DepthGrid, GuideImage

#: depth assigned to pixels whose ray hits nothing [m]
FAR_DEPTH = 80.0
#: direction towards the light used for shading (unit length)
LIGHT_DIR = np.array([-0.3, 0.85, -0.45]) / np.linalg.norm([-0.3, 0.85, -0.45])
AMBIENT = 0.25


class Camera(object):
    '''
    Pinhole camera at the origin looking along +z.
    '''

    def __init__(self, height, width, focal=None, cx=None, cy=None):
        '''
        :param height: image height [pixels]
        :param width: image width [pixels]
        :param focal: focal length [pixels] (default: 0.6 * width)
        :param cx: principal point column (default: width / 2)
        :param cy: principal point row (default: 0.35 * height, horizon above the image centre)
        '''
        kassert.is_int(height)
        kassert.is_int(width)
        kassert.positive(height, 'height')
        kassert.positive(width, 'width')
        self.height = int(height)
        self.width = int(width)
        self.focal = float(0.6 * width if focal is None else focal)
        kassert.positive(self.focal, 'focal')
        self.cx = float(width / 2.0 if cx is None else cx)
        self.cy = float(0.35 * height if cy is None else cy)

    @property
    def shape(self):
        return (self.height, self.width)

    def rays(self):
        '''
        :return: (H, W, 3) ray directions through the pixel centres, z component 1
        '''
        cols = (np.arange(self.width) + 0.5 - self.cx) / self.focal
        rows = (np.arange(self.height) + 0.5 - self.cy) / self.focal
        dirs = np.empty((self.height, self.width, 3))
        dirs[..., 0] = cols[np.newaxis, :]
        dirs[..., 1] = -rows[:, np.newaxis]
        dirs[..., 2] = 1.0
        return dirs

    def project(self, points):
        '''
        :param points: (..., 3) points with z > 0
        :return: (rows, cols) integer pixel indices (may fall outside the image)
        '''
        points = np.asarray(points, dtype=np.float64)
        cols = np.floor(self.cx + self.focal * points[..., 0] / points[..., 2]).astype(np.int64)
        rows = np.floor(self.cy - self.focal * points[..., 1] / points[..., 2]).astype(np.int64)
        return rows, cols

    def to_items(self):
        return [('camera.height', self.height), ('camera.width', self.width),
                ('camera.focal', self.focal), ('camera.cx', self.cx), ('camera.cy', self.cy)]


class Primitive(object):
    '''
    Base class of scene primitives.
    Subclasses implement :func:`intersect`.
    '''

    def __init__(self, albedo):
        '''
        :param albedo: surface reflectance in [0, 1]
        '''
        kassert.in_range(albedo, 0.0, 1.0, 'albedo')
        self.albedo = float(albedo)

    def intersect(self, rays):
        '''
        :param rays: (H, W, 3) rays with z component 1
        :return: (t, normals): (H, W) z-depth of the hit (inf on miss) and (H, W, 3) unit normals
        '''
        raise NotImplementedError('intersect is not overridden by %s' % type(self).__name__)

    def min_depth(self):
        '''
        :return: smallest z of the primitive, used to check it lies in front of the camera
        '''
        raise NotImplementedError('min_depth is not overridden by %s' % type(self).__name__)


def _constant_normals(shape, normal):
    return np.broadcast_to(np.asarray(normal, dtype=np.float64), shape + (3,)).copy()


class GroundPlane(Primitive):
    '''
    Horizontal plane y = level (below the camera).
    '''

    def __init__(self, level=-1.5, albedo=0.5):
        super(GroundPlane, self).__init__(albedo)
        if level >= 0:
            raise InvalidArgument('ground plane must be below the camera, got y=%s' % level)
        self.level = float(level)

    def intersect(self, rays):
        dy = rays[..., 1]
        with np.errstate(divide='ignore', invalid='ignore'):
            t = np.where(dy < 0, self.level / dy, np.inf)
        return t, _constant_normals(t.shape, (0.0, 1.0, 0.0))

    def min_depth(self):
        return 0.0


class Wall(Primitive):
    '''
    Fronto-parallel plane z = distance, optionally limited to x in [x_min, x_max].
    '''

    def __init__(self, distance, albedo=0.6, x_min=-np.inf, x_max=np.inf):
        super(Wall, self).__init__(albedo)
        kassert.positive(distance, 'wall distance')
        self.distance = float(distance)
        self.x_min = float(x_min)
        self.x_max = float(x_max)

    def intersect(self, rays):
        x = rays[..., 0] * self.distance
        inside = (x >= self.x_min) & (x <= self.x_max)
        t = np.where(inside, self.distance, np.inf)
        return t, _constant_normals(t.shape, (0.0, 0.0, -1.0))

    def min_depth(self):
        return self.distance


class Box(Primitive):
    '''
    Axis-aligned (vertical) box [x0, x1] x [y0, y1] x [z0, z1].
    '''

    def __init__(self, lower, upper, albedo=0.7):
        '''
        :param lower: (x0, y0, z0) corner
        :param upper: (x1, y1, z1) corner
        '''
        super(Box, self).__init__(albedo)
        self.lower = np.asarray(lower, dtype=np.float64)
        self.upper = np.asarray(upper, dtype=np.float64)
        if self.lower.shape != (3,) or self.upper.shape != (3,) or np.any(self.upper <= self.lower):
            raise InvalidArgument('box corners must satisfy lower < upper on every axis')

    def intersect(self, rays):
        # slab method, the ray origin is the camera centre
        with np.errstate(divide='ignore', invalid='ignore'):
            inv = 1.0 / rays
            t0 = self.lower * inv
            t1 = self.upper * inv
        t0 = np.where(np.isnan(t0), -np.inf, t0)
        t1 = np.where(np.isnan(t1), np.inf, t1)
        near = np.minimum(t0, t1)
        far = np.maximum(t0, t1)
        t_enter = near.max(axis=-1)
        t_exit = far.min(axis=-1)
        hit = (t_enter <= t_exit) & (t_enter > 0)
        t = np.where(hit, t_enter, np.inf)
        axis = near.argmax(axis=-1)
        normals = np.zeros(rays.shape)
        sign = -np.sign(np.take_along_axis(rays, axis[..., np.newaxis], axis=-1)[..., 0])
        np.put_along_axis(normals, axis[..., np.newaxis], sign[..., np.newaxis], axis=-1)
        return t, normals

    def min_depth(self):
        return float(self.lower[2])


class Pole(Primitive):
    '''
    Vertical cylinder of the given radius, centred at (x, z), spanning y in [y0, y1].
    '''

    def __init__(self, x, z, radius, y0, y1, albedo=0.8):
        super(Pole, self).__init__(albedo)
        kassert.positive(radius, 'pole radius')
        if y1 <= y0:
            raise InvalidArgument('pole must span y0 < y1')
        self.x = float(x)
        self.z = float(z)
        self.radius = float(radius)
        self.y0 = float(y0)
        self.y1 = float(y1)

    def intersect(self, rays):
        dx = rays[..., 0]
        # |t (dx, 1) - (x, z)|^2 = r^2 in the xz plane
        a = dx * dx + 1.0
        b = -2.0 * (dx * self.x + self.z)
        c = self.x * self.x + self.z * self.z - self.radius * self.radius
        disc = b * b - 4 * a * c
        with np.errstate(invalid='ignore'):
            t = (-b - np.sqrt(disc)) / (2 * a)
        y = rays[..., 1] * t
        hit = (disc >= 0) & (t > 0) & (y >= self.y0) & (y <= self.y1)
        t = np.where(hit, t, np.inf)
        normals = np.zeros(rays.shape)
        tt = np.where(hit, t, 0.0)
        normals[..., 0] = (tt * dx - self.x) / self.radius
        normals[..., 2] = (tt - self.z) / self.radius
        return t, normals

    def min_depth(self):
        return self.z - self.radius


class Scene(object):
    '''
    A camera and a list of primitives in front of it.
    '''

    def __init__(self, camera, primitives):
        kassert.is_of_types(camera, Camera)
        if not primitives:
            raise InvalidArgument('a scene needs at least one primitive')
        for primitive in primitives:
            kassert.is_of_types(primitive, Primitive)
            if primitive.min_depth() < 0:
                raise InvalidArgument('%s is behind the camera' % type(primitive).__name__)
        self.camera = camera
        self.primitives = list(primitives)

    def cast(self):
        '''
        Nearest hit along every pixel ray.

        :return: (depth, normals, albedo), depth is inf where nothing is hit
        '''
        rays = self.camera.rays()
        depth = np.full(self.camera.shape, np.inf)
        normals = np.zeros(self.camera.shape + (3,))
        albedo = np.zeros(self.camera.shape)
        for primitive in self.primitives:
            t, n = primitive.intersect(rays)
            nearer = t < depth
            depth = np.where(nearer, t, depth)
            normals[nearer] = n[nearer]
            albedo[nearer] = primitive.albedo
        return depth, normals, albedo


def render_gt(scene):
    '''
    Clean depth of a scene, the background being at :data:`FAR_DEPTH`.

    :type scene: :class:`Scene`
    :rtype: :class:`~udepth.grid.types.DepthGrid`
    '''
    depth, _, _ = scene.cast()
    return DepthGrid(np.minimum(depth, FAR_DEPTH))


def render_guide(scene):
    '''
    Gray shaded rendering: albedo x (ambient + lambert term), 0 on the background.

    :type scene: :class:`Scene`
    :rtype: :class:`~udepth.grid.types.GuideImage`
    '''
    depth, normals, albedo = scene.cast()
    lambert = np.clip(normals.dot(LIGHT_DIR), 0.0, 1.0)
    intensity = albedo * (AMBIENT + (1.0 - AMBIENT) * lambert)
    intensity = np.where(np.isfinite(depth), intensity, 0.0)
    return GuideImage(np.clip(intensity, 0.0, 1.0))
