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
Per-epoch training log, written as CSV.
'''
import csv
from udepth.core import InvalidArgument

COLUMNS = ('epoch', 'loss', 'mae_clean_mm', 'rmse_clean_mm', 'imae', 'irmse', 'mae_semi_mm', 'family', 'lr')


class EpochRecord(object):
    '''
    One completed epoch.
    '''

    def __init__(self, epoch, loss, clean, semi, family, lr):
        '''
        :param epoch: epoch index (from 0)
        :param loss: mean training loss of the epoch
        :param clean: :class:`~udepth.metrics.MetricReport` against the clean ground truth
        :param semi: :class:`~udepth.metrics.MetricReport` against the semi-dense ground truth
        :param family: loss family the epoch was trained with
        :param lr: learning rate of the epoch
        '''
        self.epoch = int(epoch)
        self.loss = float(loss)
        self.clean = clean
        self.semi = semi
        self.family = family
        self.lr = float(lr)

    def row(self):
        return {
            'epoch': self.epoch,
            'loss': repr(self.loss),
            'mae_clean_mm': repr(self.clean.mae_mm),
            'rmse_clean_mm': repr(self.clean.rmse_mm),
            'imae': repr(self.clean.imae_per_km),
            'irmse': repr(self.clean.irmse_per_km),
            'mae_semi_mm': repr(self.semi.mae_mm),
            'family': self.family,
            'lr': repr(self.lr),
        }


class TrainLog(object):
    '''
    Records of the completed epochs, in order.
    '''

    def __init__(self, stage):
        self.stage = stage
        self.records = []

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def append(self, record):
        if record.epoch != len(self.records):
            raise InvalidArgument('expected a record for epoch %d, got %d' % (len(self.records), record.epoch))
        self.records.append(record)

    def curve(self, column):
        '''
        :param column: a CSV column name (except 'family')
        :return: list of the column values, one per epoch
        '''
        if column not in COLUMNS or column == 'family':
            raise InvalidArgument('no numeric column %r' % column)
        return [float(record.row()[column]) for record in self.records]

    def families(self):
        return [record.family for record in self.records]

    def write_csv(self, path):
        with open(path, 'w') as f:
            writer = csv.DictWriter(f, fieldnames=COLUMNS, lineterminator='\n')
            writer.writeheader()
            for record in self.records:
                writer.writerow(record.row())

    @classmethod
    def read_rows(cls, path):
        '''
        :return: list of dicts column -> text
        '''
        with open(path, 'r') as f:
            return list(csv.DictReader(f))
