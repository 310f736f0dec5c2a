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
This module defines the :class:`~udepth.experiments.result.ExperimentResult` class
'''
import os
from collections import OrderedDict
import numpy as np
from udepth.core import InvalidArgument
from udepth.core.kvconfig import format_value


def epochs_to_reach(curve, target):
    '''
    :param curve: per-epoch values (lower is better)
    :param target: value to reach
    :return: number of epochs (1-based) until the curve is <= target, None if it never is
    '''
    for index, value in enumerate(curve):
        if value <= target:
            return index + 1
    return None


class ExperimentResult(object):
    '''
    Runs of an experiment: one row of metrics per (variant, seed), the
    training log of every run and summary values.

    :example:

        ::

            result = ExperimentResult('loss_ablation')
            result.add_run('ud', 0, {'mae_clean_mm': 812.3}, log)
            result.median('ud', 'mae_clean_mm')
            result.write('out/loss_ablation')
    '''

    def __init__(self, name):
        self.name = name
        self.rows = []
        self.logs = OrderedDict()
        self.summary = OrderedDict()

    def add_run(self, variant, seed, metrics, log=None):
        '''
        :param variant: name of the compared variant
        :param seed: seed of the run
        :param metrics: mapping of metric name -> value
        :param log: :class:`~udepth.trainer.TrainLog` of the run (default: None)
        '''
        row = OrderedDict([('run', variant), ('seed', seed)])
        row.update(metrics)
        self.rows.append(row)
        if log is not None:
            self.logs['%s_seed%d' % (variant, seed)] = log

    def variants(self):
        seen = []
        for row in self.rows:
            if row['run'] not in seen:
                seen.append(row['run'])
        return seen

    def column(self, variant, key):
        '''
        :return: values of a metric for every seed of a variant, in run order
        '''
        values = [row[key] for row in self.rows if row['run'] == variant]
        if not values:
            raise InvalidArgument('no run %r in %s' % (variant, self.name))
        return values

    def median(self, variant, key):
        return float(np.median(self.column(variant, key)))

    def set_summary(self, key, value):
        self.summary[key] = value

    def summary_lines(self):
        lines = ['experiment=%s' % self.name]
        for row in self.rows:
            lines.append(' '.join('%s=%s' % (k, format_value(v) if v is not None else 'none') for k, v in row.items()))
        for key, value in self.summary.items():
            lines.append('%s=%s' % (key, format_value(value) if value is not None else 'none'))
        return lines

    def write(self, out_dir):
        '''
        Write ``summary.txt`` and one CSV training curve per run.

        :return: path of the summary file
        '''
        if not os.path.isdir(out_dir):
            os.makedirs(out_dir)
        for run, log in self.logs.items():
            log.write_csv(os.path.join(out_dir, '%s.csv' % run))
        path = os.path.join(out_dir, 'summary.txt')
        with open(path, 'w') as f:
            f.write('\n'.join(self.summary_lines()) + '\n')
        return path
