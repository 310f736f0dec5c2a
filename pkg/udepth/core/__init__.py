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
The classes in this module have very little to do with depth completion,
however, those classes and functions are used all over udepth.
'''
import zlib
import numpy as np
from udepth.core.udepth_object import UdepthObject
from udepth.core.threading_utils import FuncThread, run_parallel


class UdepthException(Exception):
    '''
    Simple exception, used mainly to make tests better, and identify
    exceptions that were thrown by udepth directly.
    '''
    pass


class InvalidArgument(UdepthException, ValueError):
    '''
    Raised when an argument violates the precondition of an operation
    (shape mismatch, non power-of-two factor, bad configuration value ...)
    '''
    pass


class DomainError(UdepthException, ValueError):
    '''
    Raised when a value is outside the mathematical domain of an operation,
    e.g. log of a non-positive entry or a non-positive depth in inverse metrics.
    '''
    pass


class UndefinedLoss(UdepthException):
    '''
    Raised when a masked loss is evaluated over an empty mask.
    '''
    pass


class UndefinedMetric(UdepthException):
    '''
    Raised when a metric is evaluated over an empty pixel set.
    '''
    pass


class TapeError(UdepthException):
    '''
    Raised on misuse of a recording tape (non-scalar root, second backward).
    '''
    pass


class CheckpointError(UdepthException, IOError):
    '''
    Raised when a parameter file is malformed or does not match the
    architecture it is loaded into.
    '''
    pass


def make_rng(seed, op_name, *counters):
    '''
    Named counter-based random generator.
    The same (seed, op_name, counters) always yields the same stream,
    regardless of the order in which streams are created.

    :param seed: global seed
    :param op_name: name of the consuming operation (e.g. 'scan')
    :param counters: additional integer counters (frame index, epoch ...)
    :rtype: :class:`numpy.random.Generator`
    '''
    op_id = zlib.crc32(op_name.encode('utf-8')) & 0xffffffff
    entropy = [int(seed) & 0xffffffff, op_id] + [int(c) & 0xffffffff for c in counters]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))
