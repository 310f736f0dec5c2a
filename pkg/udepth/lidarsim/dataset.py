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
Synthetic dataset generation and loading.

Layout of a dataset directory::

    out_dir/manifest.txt
    out_dir/frame_0000/{guide.pgm, sparse.pgm, gt_semi.pgm, gt_clean.pgm}
    out_dir/frame_0001/...

The manifest is a key=value text file echoing every configuration value
the dataset was generated with, followed by one line per frame listing
its files. Generation is a pure function of (preset, seed): frames can be
produced on several threads and the files are byte-identical.
'''
import os
from collections import OrderedDict
from udepth.core import InvalidArgument, UdepthObject, kassert, run_parallel
from udepth.grid import pnm
from udepth.lidarsim.scene import render_gt, render_guide
from udepth.lidarsim.scan import simulate_scan, corrupt_gt
from udepth.lidarsim.scenes import ScenePreset, random_scene

MANIFEST_NAME = 'manifest.txt'
FRAME_FILES = ('guide.pgm', 'sparse.pgm', 'gt_semi.pgm', 'gt_clean.pgm')


def frame_name(index):
    return 'frame_%04d' % index


class Frame(object):
    '''
    One training / evaluation sample.
    '''

    def __init__(self, name, guide, sparse, gt_semi, gt_clean):
        '''
        :param name: frame name (directory name)
        :param guide: :class:`~udepth.grid.types.GuideImage`
        :param sparse: sparse LiDAR input (:class:`~udepth.grid.types.SparseDepthGrid`)
        :param gt_semi: semi-dense ground truth with outliers (SparseDepthGrid)
        :param gt_clean: clean ground truth (:class:`~udepth.grid.types.DepthGrid`)
        '''
        self.name = name
        self.guide = guide
        self.sparse = sparse
        self.gt_semi = gt_semi
        self.gt_clean = gt_clean

    @property
    def shape(self):
        return self.sparse.shape

    def target(self, against):
        '''
        :param against: 'clean' or 'semi'
        :return: the ground truth to evaluate against, as a sparse grid
        '''
        kassert.is_in(against, ('clean', 'semi'))
        if against == 'clean':
            return self.gt_clean.to_sparse()
        return self.gt_semi

    def write(self, frame_dir):
        if not os.path.isdir(frame_dir):
            os.makedirs(frame_dir)
        pnm.write_guide(os.path.join(frame_dir, 'guide.pgm'), self.guide)
        pnm.write_sparse(os.path.join(frame_dir, 'sparse.pgm'), self.sparse)
        pnm.write_sparse(os.path.join(frame_dir, 'gt_semi.pgm'), self.gt_semi)
        pnm.write_depth(os.path.join(frame_dir, 'gt_clean.pgm'), self.gt_clean)

    @classmethod
    def read(cls, frame_dir):
        '''
        :raise IOError: if a file is missing
        '''
        return cls(
            os.path.basename(os.path.normpath(frame_dir)),
            pnm.read_guide(os.path.join(frame_dir, 'guide.pgm')),
            pnm.read_sparse(os.path.join(frame_dir, 'sparse.pgm')),
            pnm.read_sparse(os.path.join(frame_dir, 'gt_semi.pgm')),
            pnm.read_depth(os.path.join(frame_dir, 'gt_clean.pgm')))


def generate_frame(preset, seed, index):
    '''
    :return: the :class:`Frame` of a given index, a pure function of its arguments
    '''
    scene = random_scene(preset.camera, seed, index)
    gt_clean = render_gt(scene)
    return Frame(
        frame_name(index),
        render_guide(scene),
        simulate_scan(gt_clean, preset.scan, seed, index, preset.camera),
        corrupt_gt(gt_clean, preset.corruption, seed, index),
        gt_clean)


class Manifest(object):
    '''
    Configuration echo and file list of a dataset.
    '''

    def __init__(self, items, frames, path=None):
        '''
        :param items: list of (key, value) configuration pairs
        :param frames: list of frame names
        :param path: manifest file path (default: None)
        '''
        self.items = OrderedDict((k, str(v)) for k, v in items)
        self.frames = list(frames)
        self.path = path

    def get(self, key, default=None):
        return self.items.get(key, default)

    def to_text(self):
        lines = ['# udepth dataset manifest']
        lines.extend('%s=%s' % (k, v) for k, v in self.items.items())
        for name in self.frames:
            lines.append('frame=%s' % ','.join('%s/%s' % (name, f) for f in FRAME_FILES))
        return '\n'.join(lines) + '\n'

    def write(self, path):
        with open(path, 'w') as f:
            f.write(self.to_text())
        self.path = path

    @classmethod
    def read(cls, path):
        items = []
        frames = []
        with open(path, 'r') as f:
            for line in f:
                line = line.strip()
                if not line or line.startswith('#'):
                    continue
                if '=' not in line:
                    raise InvalidArgument('%s: malformed manifest line %r' % (path, line))
                key, value = line.split('=', 1)
                if key == 'frame':
                    frames.append(value.split(',')[0].split('/')[0])
                else:
                    items.append((key, value))
        return cls(items, frames, path)


class DatasetGenerator(UdepthObject):
    '''
    Writes randomised frames of a :class:`ScenePreset` to a directory.
    '''

    def __init__(self, out_dir, preset=None, seed=0, workers=1, logger=None):
        '''
        :param out_dir: output directory (created if needed)
        :param preset: :class:`~udepth.lidarsim.scenes.ScenePreset` (default: ScenePreset())
        :param seed: global seed
        :param workers: number of generation threads (default: 1)
        :param logger: logger (default: the udepth logger)
        '''
        super(DatasetGenerator, self).__init__('DatasetGenerator', logger)
        self.out_dir = out_dir
        self.preset = preset if preset is not None else ScenePreset()
        self.seed = int(seed)
        self.workers = max(1, int(workers))

    def _generate_one(self, index):
        frame = generate_frame(self.preset, self.seed, index)
        frame.write(os.path.join(self.out_dir, frame.name))
        self.logger.debug('%s: %d sparse samples (%.2f%%)' % (
            frame.name, frame.sparse.valid.sum(), 100.0 * frame.sparse.validity_fraction()))
        return frame.name

    def generate(self, n_frames):
        '''
        :param n_frames: number of frames (>= 1)
        :rtype: :class:`Manifest`
        '''
        kassert.is_int(n_frames)
        if n_frames < 1:
            raise InvalidArgument('n_frames must be >= 1, got %s' % n_frames)
        if not os.path.isdir(self.out_dir):
            os.makedirs(self.out_dir)
        self.logger.info('generating %d frames into %s (seed %d)' % (n_frames, self.out_dir, self.seed))
        names = run_parallel([(self._generate_one, (i,)) for i in range(n_frames)], self.workers)
        items = [('seed', self.seed), ('frames', n_frames)] + self.preset.to_items()
        manifest = Manifest(items, names)
        manifest.write(os.path.join(self.out_dir, MANIFEST_NAME))
        self.logger.info('manifest written to %s' % manifest.path)
        return manifest


def gen_dataset(n_frames, seed, out_dir, preset=None, workers=1):
    '''
    Generate a dataset directory.

    :param n_frames: number of frames (>= 1)
    :param seed: global seed
    :param out_dir: output directory
    :param preset: :class:`~udepth.lidarsim.scenes.ScenePreset` (default: ScenePreset())
    :param workers: number of generation threads (default: 1)
    :rtype: :class:`Manifest`
    :raise IOError: if out_dir cannot be written
    '''
    return DatasetGenerator(out_dir, preset, seed, workers).generate(n_frames)


class Dataset(object):
    '''
    Frames of a generated dataset directory, in manifest order.
    '''

    def __init__(self, frames, manifest=None):
        self.frames = list(frames)
        self.manifest = manifest

    @classmethod
    def load(cls, data_dir):
        '''
        :param data_dir: dataset directory
        :raise IOError: if the directory or its manifest is missing
        '''
        path = os.path.join(data_dir, MANIFEST_NAME)
        if not os.path.isfile(path):
            raise IOError('no dataset manifest at %s' % path)
        manifest = Manifest.read(path)
        frames = [Frame.read(os.path.join(data_dir, name)) for name in manifest.frames]
        return cls(frames, manifest)

    def __len__(self):
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)

    def __getitem__(self, index):
        return self.frames[index]

    def split(self, n_eval):
        '''
        The last n_eval frames form the evaluation split.

        :return: (train Dataset, eval Dataset)
        '''
        kassert.in_range(n_eval, 0, len(self.frames) - 1, 'n_eval')
        cut = len(self.frames) - n_eval
        return Dataset(self.frames[:cut], self.manifest), Dataset(self.frames[cut:], self.manifest)
