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
This module provides various assertion functions used by udepth,
not that important, but makes the life easier.
Useful for making assertions that throw :class:`~udepth.core.InvalidArgument`
'''
import numpy as np
from udepth.core import InvalidArgument


def is_of_types(obj, the_types):
    '''
    :param obj: object to assert
    :param the_types: iterable of types, or a signle type
    :raise: an exception if obj is not an instance of types
    '''
    if not isinstance(obj, the_types):
        raise InvalidArgument('object type (%s) is not one of (%s)' % (type(obj), the_types))


def is_int(obj):
    '''
    :param obj: object to assert
    :raise: an exception if obj is not an int type
    '''
    is_of_types(obj, (int, np.integer))


def is_in(obj, it):
    '''
    :param obj: object to assert
    :param it: iterable of elements we assert obj is in
    :raise: an exception if obj is in an iterable
    '''
    if obj not in it:
        raise InvalidArgument('(%s) is not in %s' % (obj, it))


def not_none(obj):
    '''
    :param obj: object to assert
    :raise: an exception if obj is not None
    '''
    if obj is None:
        raise InvalidArgument('object is None')


def positive(value, name='value'):
    '''
    :param value: number to assert
    :param name: name used in the error message
    :raise: an exception if value is not strictly positive
    '''
    if not value > 0:
        raise InvalidArgument('%s must be positive, got %s' % (name, value))


def in_range(value, low, high, name='value'):
    '''
    Assert low <= value <= high
    '''
    if not (low <= value <= high):
        raise InvalidArgument('%s must be in [%s, %s], got %s' % (name, low, high, value))


def power_of_two(factor):
    '''
    :param factor: scale factor
    :raise: an exception if factor is not a positive integer power of 2
    '''
    is_int(factor)
    if factor < 1 or (factor & (factor - 1)) != 0:
        raise InvalidArgument('factor must be a power of 2, got %s' % (factor,))


def same_shape(*arrays):
    '''
    :param arrays: arrays (or objects with a shape attribute) to compare
    :raise: an exception if the shapes differ
    '''
    shapes = [tuple(np.shape(a)) if not hasattr(a, 'shape') else tuple(a.shape) for a in arrays]
    if len(set(shapes)) > 1:
        raise InvalidArgument('shape mismatch: %s' % (shapes,))
