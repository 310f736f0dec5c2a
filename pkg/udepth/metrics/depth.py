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
KITTI-style depth metrics over the valid ground-truth pixels.

MAE and RMSE are reported in millimetres, IMAE and IRMSE on inverse depth
in 1/km (1/d_km = 1000 / d_m).
'''
import math
import numpy as np
from udepth.core import DomainError, UndefinedMetric, kassert
from udepth.metrics.report import MetricReport


def _values(obj):
    return np.asarray(getattr(obj, 'depth', obj), dtype=np.float64)


def _metrics(pred, gt):
    '''
    :param pred: predicted depths of the evaluated pixels (1-d, meters)
    :param gt: ground-truth depths of the same pixels (1-d, meters)
    '''
    n_valid = pred.size
    if n_valid == 0:
        raise UndefinedMetric('no pixel to evaluate')
    if np.any(pred <= 0):
        raise DomainError('prediction must be positive at valid pixels')
    err = pred - gt
    inv_err = 1000.0 / pred - 1000.0 / gt
    mae = math.fsum(np.abs(err).tolist()) / n_valid
    mse = math.fsum((err * err).tolist()) / n_valid
    imae = math.fsum(np.abs(inv_err).tolist()) / n_valid
    imse = math.fsum((inv_err * inv_err).tolist()) / n_valid
    return MetricReport(math.sqrt(mse) * 1000.0, mae * 1000.0, math.sqrt(imse), imae, n_valid)


def evaluate(pred, gt):
    '''
    :param pred: predicted depth (DepthGrid or array, meters)
    :param gt: ground truth (SparseDepthGrid, meters)
    :rtype: :class:`~udepth.metrics.report.MetricReport`
    '''
    return evaluate_subset(pred, gt, None)


def evaluate_subset(pred, gt, selector):
    '''
    Metrics restricted to the selected valid pixels.

    :param pred: predicted depth (DepthGrid or array, meters)
    :param gt: ground truth (SparseDepthGrid)
    :param selector: per-pixel boolean array (None selects everything)
    :raise UndefinedMetric: when no valid pixel is selected
    '''
    pred = _values(pred)
    depth = _values(gt)
    valid = np.asarray(gt.valid, dtype=bool) if hasattr(gt, 'valid') else depth > 0
    kassert.same_shape(pred, depth, valid)
    if selector is not None:
        selector = np.asarray(selector, dtype=bool)
        kassert.same_shape(selector, valid)
        valid = valid & selector
    if not valid.any():
        raise UndefinedMetric('selector and ground-truth validity do not intersect')
    return _metrics(pred[valid], depth[valid])


def top_fraction_selector(s, frac, valid=None):
    '''
    Select the ``frac`` share of pixels with the highest log-variance.
    Ties are broken by pixel index (row-major, lower first).

    :param s: log-variance (LogVarGrid or array)
    :param frac: fraction in (0, 1]
    :param valid: optional boolean array restricting the candidates
    :return: boolean selector with the shape of s
    '''
    kassert.in_range(frac, 0.0, 1.0, 'frac')
    kassert.positive(frac, 'frac')
    s = np.asarray(getattr(s, 's', s), dtype=np.float64)
    candidates = np.ones(s.shape, dtype=bool) if valid is None else np.asarray(valid, dtype=bool)
    kassert.same_shape(s, candidates)
    index = np.flatnonzero(candidates)
    selector = np.zeros(s.size, dtype=bool)
    if index.size:
        count = int(math.ceil(frac * index.size))
        order = np.argsort(-s.ravel()[index], kind='stable')
        selector[index[order[:count]]] = True
    return selector.reshape(s.shape)
