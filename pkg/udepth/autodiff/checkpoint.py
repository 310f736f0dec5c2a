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
Parameter checkpoint codec.

Layout (all integers unsigned 32-bit little-endian)::

    magic 'UDCK' | version | entry count | arch length | arch (utf-8)
    entry*: name length | name (utf-8) | rank | dims[rank] | values (float64 LE)

The architecture string is a key=value echo of the model configuration,
used to validate the shapes on load.
'''
from collections import OrderedDict
import numpy as np
from bitstring import BitArray, ConstBitStream, ReadError, pack
from udepth.core import CheckpointError

MAGIC = b'UDCK'
VERSION = 1


def _pack_str(value):
    raw = value.encode('utf-8')
    bits = BitArray(pack('uintle:32', len(raw)))
    bits.append(BitArray(bytes=raw))
    return bits


def encode_params(params, arch=''):
    '''
    :param params: ordered mapping name -> array
    :param arch: architecture echo
    :return: checkpoint bytes
    '''
    bits = BitArray(pack('bytes:4, uintle:32, uintle:32', MAGIC, VERSION, len(params)))
    bits.append(_pack_str(arch))
    for name, value in params.items():
        value = np.asarray(value, dtype=np.float64)
        bits.append(_pack_str(name))
        bits.append(pack('uintle:32', value.ndim))
        for dim in value.shape:
            bits.append(pack('uintle:32', dim))
        bits.append(BitArray(bytes=value.astype('<f8').tobytes()))
    return bits.tobytes()


def _read_str(stream):
    length = stream.read('uintle:32')
    if length == 0:
        return ''
    return stream.read('bytes:%d' % length).decode('utf-8')


def decode_params(data):
    '''
    :param data: checkpoint bytes
    :return: (OrderedDict name -> array, arch string)
    :raise: :class:`~udepth.core.CheckpointError` on malformed content
    '''
    stream = ConstBitStream(bytes=data)
    try:
        magic = stream.read('bytes:4')
        if magic != MAGIC:
            raise CheckpointError('bad checkpoint magic %r' % (magic,))
        version = stream.read('uintle:32')
        if version != VERSION:
            raise CheckpointError('unsupported checkpoint version %d' % version)
        count = stream.read('uintle:32')
        arch = _read_str(stream)
        params = OrderedDict()
        for _ in range(count):
            name = _read_str(stream)
            rank = stream.read('uintle:32')
            shape = tuple(stream.read('uintle:32') for _ in range(rank))
            size = int(np.prod(shape, dtype=np.int64))
            raw = stream.read('bytes:%d' % (8 * size)) if size else b''
            params[name] = np.frombuffer(raw, dtype='<f8').astype(np.float64).reshape(shape)
    except (ReadError, UnicodeDecodeError, ValueError) as ex:
        raise CheckpointError('malformed checkpoint: %s' % ex)
    if stream.pos != stream.len:
        raise CheckpointError('trailing bytes after %d checkpoint entries' % count)
    return params, arch


def save_params(path, params, arch=''):
    with open(path, 'wb') as f:
        f.write(encode_params(params, arch))


def load_params(path):
    with open(path, 'rb') as f:
        return decode_params(f.read())
