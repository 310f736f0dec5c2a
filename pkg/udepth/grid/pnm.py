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
Binary PGM (P5) / PPM (P6) codec.

Depth grids are stored as 16-bit big-endian PGM (maxval 65535) with the
KITTI encoding: value = round(depth_m * 256), value 0 marks a missing pixel.
KITTI 16-bit files are therefore readable as they are.
Guide images are stored as 8-bit PGM (gray) or PPM (color).
'''
import numpy as np
from udepth.core import InvalidArgument
from udepth.grid.types import DepthGrid, GuideImage, SparseDepthGrid

DEPTH_SCALE = 256.0
DEPTH_MAXVAL = 65535
GUIDE_MAXVAL = 255

_MAGIC_CHANNELS = {b'P5': 1, b'P6': 3}


class PnmImage(object):
    '''
    Raw content of a PNM file.
    '''

    def __init__(self, magic, maxval, pixels):
        '''
        :param magic: b'P5' or b'P6'
        :param maxval: maximal sample value
        :param pixels: integer array, (H, W) for P5 or (H, W, 3) for P6
        '''
        self.magic = magic
        self.maxval = maxval
        self.pixels = pixels

    @property
    def channels(self):
        return _MAGIC_CHANNELS[self.magic]


def _sample_dtype(maxval):
    return np.dtype('>u2') if maxval > 255 else np.dtype('u1')


def _read_header_tokens(data):
    '''
    :return: (magic, width, height, maxval, raster offset)
    '''
    tokens = []
    pos = 0
    while len(tokens) < 4:
        if pos >= len(data):
            raise InvalidArgument('truncated PNM header')
        char = data[pos:pos + 1]
        if char == b'#':
            end = data.find(b'\n', pos)
            pos = len(data) if end < 0 else end + 1
        elif char.isspace():
            pos += 1
        else:
            start = pos
            while pos < len(data) and not data[pos:pos + 1].isspace():
                pos += 1
            tokens.append(data[start:pos])
    # exactly one whitespace byte separates the header from the raster
    pos += 1
    magic = tokens[0]
    if magic not in _MAGIC_CHANNELS:
        raise InvalidArgument('unsupported PNM magic %r' % (magic,))
    try:
        width, height, maxval = [int(t) for t in tokens[1:]]
    except ValueError:
        raise InvalidArgument('malformed PNM header: %r' % (tokens,))
    if width < 1 or height < 1 or not (0 < maxval <= 65535):
        raise InvalidArgument('bad PNM dimensions / maxval: %r' % (tokens,))
    return magic, width, height, maxval, pos


def decode_pnm(data):
    '''
    :param data: bytes of a P5 / P6 file
    :rtype: :class:`PnmImage`
    '''
    magic, width, height, maxval, offset = _read_header_tokens(data)
    channels = _MAGIC_CHANNELS[magic]
    dtype = _sample_dtype(maxval)
    count = width * height * channels
    raster = data[offset:offset + count * dtype.itemsize]
    if len(raster) != count * dtype.itemsize:
        raise InvalidArgument('truncated PNM raster')
    pixels = np.frombuffer(raster, dtype=dtype).astype(np.int64)
    if channels == 1:
        pixels = pixels.reshape(height, width)
    else:
        pixels = pixels.reshape(height, width, 3)
    if pixels.max(initial=0) > maxval:
        raise InvalidArgument('PNM sample exceeds maxval %d' % maxval)
    return PnmImage(magic, maxval, pixels)


def encode_pnm(image):
    '''
    :type image: :class:`PnmImage`
    :return: file bytes
    '''
    pixels = np.asarray(image.pixels)
    height, width = pixels.shape[:2]
    header = b'%s\n%d %d\n%d\n' % (image.magic, width, height, image.maxval)
    return header + pixels.astype(_sample_dtype(image.maxval)).tobytes()


def read_pnm(path):
    with open(path, 'rb') as f:
        return decode_pnm(f.read())


def write_pnm(path, image):
    with open(path, 'wb') as f:
        f.write(encode_pnm(image))


def encode_depth_values(depth, valid):
    '''
    :return: uint16-range integer array, 0 at invalid pixels
    '''
    values = np.clip(np.rint(np.asarray(depth) * DEPTH_SCALE), 1, DEPTH_MAXVAL).astype(np.int64)
    return np.where(valid, values, 0)


def write_sparse(path, grid):
    '''
    :type grid: :class:`~udepth.grid.types.SparseDepthGrid`
    '''
    write_pnm(path, PnmImage(b'P5', DEPTH_MAXVAL, encode_depth_values(grid.depth, grid.valid)))


def write_depth(path, grid):
    '''
    :type grid: :class:`~udepth.grid.types.DepthGrid` (0 entries are written as missing)
    '''
    write_pnm(path, PnmImage(b'P5', DEPTH_MAXVAL, encode_depth_values(grid.depth, grid.depth > 0)))


def _read_depth_values(path):
    image = read_pnm(path)
    if image.channels != 1:
        raise InvalidArgument('%s: depth files must be single channel PGM' % path)
    if image.maxval > 255:
        return image.pixels / DEPTH_SCALE
    # 8-bit depth files hold whole meters
    return image.pixels.astype(np.float64)


def read_sparse(path):
    '''
    :rtype: :class:`~udepth.grid.types.SparseDepthGrid`
    '''
    return SparseDepthGrid(_read_depth_values(path))


def read_depth(path):
    '''
    :rtype: :class:`~udepth.grid.types.DepthGrid`
    '''
    return DepthGrid(_read_depth_values(path))


def write_guide(path, guide):
    '''
    :type guide: :class:`~udepth.grid.types.GuideImage`
    '''
    values = np.rint(guide.values * GUIDE_MAXVAL).astype(np.int64)
    if guide.channels == 1:
        write_pnm(path, PnmImage(b'P5', GUIDE_MAXVAL, values[0]))
    else:
        write_pnm(path, PnmImage(b'P6', GUIDE_MAXVAL, np.transpose(values, (1, 2, 0))))


def read_guide(path):
    '''
    :rtype: :class:`~udepth.grid.types.GuideImage`
    '''
    image = read_pnm(path)
    values = image.pixels / float(image.maxval)
    if image.channels == 3:
        values = np.transpose(values, (2, 0, 1))
    return GuideImage(values)


def write_rgb(path, rgb):
    '''
    :param rgb: (H, W, 3) uint8 array
    '''
    write_pnm(path, PnmImage(b'P6', GUIDE_MAXVAL, np.asarray(rgb)))


def read_rgb(path):
    '''
    :return: (H, W, 3) integer array of a P6 file
    '''
    image = read_pnm(path)
    if image.channels != 3:
        raise InvalidArgument('%s is not a PPM file' % path)
    return image.pixels
