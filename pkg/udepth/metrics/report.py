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
This module defines the :class:`~udepth.metrics.report.MetricReport` class
'''
import math
from udepth.core import InvalidArgument, UndefinedMetric


class MetricReport(object):
    '''
    Evaluation result of one prediction (or the mean over several frames).

    :example:

        ::

            report = evaluate(pred, gt)
            print(report.to_line())
            # rmse_mm=1290.99... mae_mm=1000 irmse=... imae=... n=3
    '''

    fields = ('rmse_mm', 'mae_mm', 'irmse', 'imae', 'n')

    def __init__(self, rmse_mm, mae_mm, irmse_per_km, imae_per_km, n_valid, frames=None):
        '''
        :param rmse_mm: root mean square error [mm]
        :param mae_mm: mean absolute error [mm]
        :param irmse_per_km: root mean square error of inverse depth [1/km]
        :param imae_per_km: mean absolute error of inverse depth [1/km]
        :param n_valid: number of evaluated pixels
        :param frames: per-frame reports this report averages (default: None)
        '''
        self.rmse_mm = float(rmse_mm)
        self.mae_mm = float(mae_mm)
        self.irmse_per_km = float(irmse_per_km)
        self.imae_per_km = float(imae_per_km)
        self.n_valid = int(n_valid)
        self.frames = list(frames) if frames else []

    def get(self, key):
        '''
        Get a value by its serialised key

        :param key: one of ``MetricReport.fields``
        '''
        return self.to_dict()[key]

    def to_dict(self):
        '''
        :return: dictionary representation of the report (without per-frame reports)
        '''
        return {
            'rmse_mm': self.rmse_mm,
            'mae_mm': self.mae_mm,
            'irmse': self.irmse_per_km,
            'imae': self.imae_per_km,
            'n': self.n_valid,
        }

    @classmethod
    def from_dict(cls, d):
        '''
        Construct a ``MetricReport`` from its dictionary form.
        '''
        missing = [k for k in cls.fields if k not in d]
        if missing:
            raise InvalidArgument('metric report is missing %s' % ', '.join(missing))
        return cls(d['rmse_mm'], d['mae_mm'], d['irmse'], d['imae'], d['n'])

    def to_line(self):
        '''
        :return: single-line key=value form, floats written with full precision
        '''
        d = self.to_dict()
        return ' '.join('%s=%s' % (k, repr(d[k])) for k in self.fields)

    @classmethod
    def from_line(cls, line):
        '''
        Parse the output of :func:`to_line`.
        '''
        d = {}
        for token in line.split():
            if '=' not in token:
                raise InvalidArgument('bad metric token %r' % token)
            key, value = token.split('=', 1)
            d[key] = int(value) if key == 'n' else float(value)
        return cls.from_dict(d)

    @classmethod
    def mean_of(cls, reports):
        '''
        Mean of per-frame metrics (each frame weighs the same).
        The per-frame reports are kept in ``frames``.

        :param reports: list of MetricReport
        '''
        if not reports:
            raise UndefinedMetric('mean of zero reports')
        count = len(reports)
        return cls(
            math.fsum(r.rmse_mm for r in reports) / count,
            math.fsum(r.mae_mm for r in reports) / count,
            math.fsum(r.irmse_per_km for r in reports) / count,
            math.fsum(r.imae_per_km for r in reports) / count,
            sum(r.n_valid for r in reports),
            frames=reports)

    def __eq__(self, other):
        return isinstance(other, MetricReport) and self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return 'MetricReport(%s)' % self.to_line()
