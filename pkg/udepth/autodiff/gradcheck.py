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
Central finite-difference checks of recorded gradients.
'''
import numpy as np
from udepth.core import kassert
from udepth.autodiff.tensor import Tape, Tensor


def finite_difference(func, x, eps=1e-6, coords=None):
    '''
    Central difference (f(x + eps) - f(x - eps)) / (2 eps) per coordinate.

    :param func: function(Tensor) -> scalar Tensor
    :param x: point (array)
    :param eps: step
    :param coords: flat indices to evaluate (default: all)
    :return: array shaped like x (NaN at coordinates that were not evaluated)
    '''
    kassert.positive(eps, 'eps')
    x = np.array(x, dtype=np.float64, copy=True)
    grad = np.full(x.shape, np.nan)
    flat = x.reshape(-1)
    if coords is None:
        coords = range(flat.size)
    for idx in coords:
        orig = flat[idx]
        flat[idx] = orig + eps
        f_plus = func(Tensor.constant(x)).item()
        flat[idx] = orig - eps
        f_minus = func(Tensor.constant(x)).item()
        flat[idx] = orig
        grad.reshape(-1)[idx] = (f_plus - f_minus) / (2 * eps)
    return grad


def one_sided_differences(func, x, eps=1e-6, coords=None):
    '''
    Left and right differences (f(x) - f(x - eps)) / eps and
    (f(x + eps) - f(x)) / eps per coordinate. Their mean is the central
    difference; a gap between them marks a kink within eps of x.

    :param func: function(Tensor) -> scalar Tensor
    :param x: point (array)
    :param eps: step
    :param coords: flat indices to evaluate (default: all)
    :return: (left, right) arrays shaped like x (NaN where not evaluated)
    '''
    kassert.positive(eps, 'eps')
    x = np.array(x, dtype=np.float64, copy=True)
    left = np.full(x.shape, np.nan)
    right = np.full(x.shape, np.nan)
    flat = x.reshape(-1)
    if coords is None:
        coords = range(flat.size)
    f_center = func(Tensor.constant(x)).item()
    for idx in coords:
        orig = flat[idx]
        flat[idx] = orig + eps
        f_plus = func(Tensor.constant(x)).item()
        flat[idx] = orig - eps
        f_minus = func(Tensor.constant(x)).item()
        flat[idx] = orig
        left.reshape(-1)[idx] = (f_center - f_minus) / eps
        right.reshape(-1)[idx] = (f_plus - f_center) / eps
    return left, right


def recorded_gradient(func, x):
    '''
    :param func: function(Tensor) -> scalar Tensor
    :param x: point (array)
    :return: (value, gradient) of func at x from a single backward pass
    '''
    tape = Tape()
    leaf = tape.leaf(x, name='x')
    out = func(leaf)
    grads = tape.backward(out)
    return out.item(), grads['x']


def grad_check(func, x, eps=1e-6, exclude=None, coords=None, kink_tol=None):
    '''
    Compare the recorded gradient of func at x against central differences.

    The error of a coordinate is |analytic - numeric| divided by the
    largest gradient magnitude of the compared set, so exactly linear
    functions give errors at rounding level.

    With kink_tol set, a coordinate whose left and right one-sided
    differences are further apart than kink_tol (relative to the same
    magnitude) is a kink and is left out. An undetected kink moves the
    central difference by at most half of that gap.

    :param func: recorded scalar function(Tensor) -> Tensor
    :param x: point (array)
    :param eps: finite-difference step (> 0)
    :param exclude: boolean mask of coordinates left out (kinks)
    :param coords: flat indices to compare (default: all)
    :param kink_tol: one-sided gap above which a coordinate counts as a
        kink (default: no detection)
    :return: max relative error
    '''
    kassert.positive(eps, 'eps')
    if kink_tol is not None:
        kassert.positive(kink_tol, 'kink_tol')
    x = np.asarray(x, dtype=np.float64)
    _, analytic = recorded_gradient(func, x)
    if coords is None:
        coords = np.arange(x.size)
    coords = np.asarray(coords, dtype=int)
    if exclude is not None:
        excluded = np.asarray(exclude, dtype=bool).reshape(-1)
        coords = coords[~excluded[coords]]
    if coords.size == 0:
        return 0.0
    analytic = analytic.reshape(-1)[coords]
    if kink_tol is None:
        numeric = finite_difference(func, x, eps, coords).reshape(-1)[coords]
        magnitude = max(np.max(np.abs(analytic)), np.max(np.abs(numeric)), 1e-12)
        return float(np.max(np.abs(analytic - numeric)) / magnitude)
    left, right = one_sided_differences(func, x, eps, coords)
    left = left.reshape(-1)[coords]
    right = right.reshape(-1)[coords]
    numeric = (left + right) / 2
    magnitude = max(np.max(np.abs(analytic)), np.max(np.abs(numeric)), 1e-12)
    smooth = np.abs(right - left) <= kink_tol * magnitude
    if not np.any(smooth):
        return 0.0
    return float(np.max(np.abs(analytic[smooth] - numeric[smooth])) / magnitude)


def near_zero(values, tol=1e-8):
    '''
    :return: mask of entries within tol of zero (kink points of relu / abs)
    '''
    return np.abs(np.asarray(values)) <= tol
