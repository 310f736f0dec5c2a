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
Tests for the ablation experiments and their results
'''
import os
import numpy as np
from common import BaseTestCase, small_dataset, small_preset, acceptance
from udepth.core import InvalidArgument
from udepth.lidarsim import ScenePreset, CorruptionConfig, generate_frame
from udepth.model import ModelConfig, JointModel, Pipeline
from udepth.trainer import TrainConfig, TrainLog
from udepth.experiments import ExperimentResult, ExperimentSettings, EXPERIMENTS, epochs_to_reach
from udepth.experiments import LossAblation, ResidualAblation, NsSweep, ResidualInputAblation
from udepth.experiments import top_uncertainty_report, block_gradient_norms

ACCEPTANCE_SEEDS = (0, 1, 2)
TINY = ['channels=4,4,4', 'residual_channels=4,4', 'ns=1', 'batch=2']


def tiny_settings(n_frames=2, **kwargs):
    values = dict(seeds=(0,), epochs=1, stage2_epochs=1, overrides=TINY)
    values.update(kwargs)
    return ExperimentSettings(small_dataset(n_frames, seed=9), **values)


class EpochsToReachTests(BaseTestCase):

    def testReach(self):
        self.assertEqual(epochs_to_reach([5.0, 4.0, 3.0], 4.0), 2)
        self.assertEqual(epochs_to_reach([3.0, 4.0], 4.0), 1)
        self.assertEqual(epochs_to_reach([5.0, 4.5], 4.0), None)
        self.assertEqual(epochs_to_reach([], 4.0), None)


class ExperimentResultTests(BaseTestCase):

    def testRowsAndMedians(self):
        result = ExperimentResult('demo')
        for seed, mae in enumerate((3.0, 1.0, 2.0)):
            result.add_run('a', seed, {'mae_clean_mm': mae})
        result.add_run('b', 0, {'mae_clean_mm': 7.5})
        self.assertEqual(result.variants(), ['a', 'b'])
        self.assertEqual(result.column('a', 'mae_clean_mm'), [3.0, 1.0, 2.0])
        self.assertEqual(result.median('a', 'mae_clean_mm'), 2.0)
        with self.assertRaises(InvalidArgument):
            result.column('c', 'mae_clean_mm')

    def testWrite(self):
        result = ExperimentResult('demo')
        result.add_run('a', 0, {'mae_clean_mm': 1.5}, TrainLog('one'))
        result.set_summary('gain', 0.25)
        result.set_summary('epochs', None)
        out_dir = os.path.join(self.mkdtemp(), 'out')
        path = result.write(out_dir)
        self.assertEqual(path, os.path.join(out_dir, 'summary.txt'))
        with open(path) as f:
            lines = f.read().splitlines()
        self.assertEqual(lines, ['experiment=demo', 'run=a seed=0 mae_clean_mm=1.5', 'gain=0.25', 'epochs=none'])
        self.assertTrue(os.path.isfile(os.path.join(out_dir, 'a_seed0.csv')))


class ExperimentSettingsTests(BaseTestCase):

    def testSplit(self):
        settings = tiny_settings(3, eval_frames=1)
        self.assertEqual(len(settings.train_frames), 2)
        self.assertEqual(len(settings.eval_frames), 1)
        settings = tiny_settings(3)
        self.assertEqual(len(settings.eval_frames), 3)

    def testInvalid(self):
        with self.assertRaises(InvalidArgument):
            tiny_settings(2, eval_frames=2)
        with self.assertRaises(InvalidArgument):
            tiny_settings(2, seeds=())

    def testConfigs(self):
        train, model = tiny_settings().configs('two', 4, 'loss=ur')
        self.assertEqual(train.stage, 'two')
        self.assertEqual(train.seed, 4)
        self.assertEqual(train.loss, 'ur')
        self.assertEqual(model.residual_channels, (4, 4))


class ExperimentRunTests(BaseTestCase):

    def testRegistry(self):
        self.assertEqual(sorted(EXPERIMENTS), ['loss_ablation', 'ns_sweep', 'residual_ablation', 'residual_input_ablation'])

    def testLossAblation(self):
        result = LossAblation(tiny_settings()).run()
        self.assertEqual(result.variants(), ['mse', 'ud', 'ud_nojeffrey'])
        self.assertIn('ud_mae_gain', result.summary)
        self.assertEqual(result.summary['seed0_mse_epochs_to_final'], 1)
        self.assertEqual(len(result.logs), 3)

    def testResidualAblation(self):
        result = ResidualAblation(tiny_settings()).run()
        self.assertEqual(result.variants(), ['stage1', 'ur', 'urb'])
        for variant in ('stage1', 'ur', 'urb'):
            self.assertGreater(result.median(variant, 'top_mae_clean_mm'), 0.0)

    def testNsSweep(self):
        result = NsSweep(tiny_settings(), ns_values=(1, 2)).run()
        self.assertEqual(result.variants(), ['ns1', 'ns2'])
        self.assertGreater(result.column('ns2', 'min_block_grad_norm')[0], 0.0)

    def testResidualInputAblation(self):
        result = ResidualInputAblation(tiny_settings(), input_sets=(('guide',), ('stage1', 'sparse'))).run()
        self.assertEqual(result.variants(), ['guide', 'stage1+sparse'])
        self.assertIn('median_mae_stage1+sparse_mm', result.summary)

    def testTopUncertaintyReport(self):
        frames = small_dataset(2, seed=4).frames
        pipeline = Pipeline(JointModel.init(0, ModelConfig(ns=1, channels=(4, 4, 4))))
        report = top_uncertainty_report(pipeline, frames, 0.1)
        self.assertEqual(len(report.frames), 2)
        self.assertGreater(report.n_valid, 0)

    def testBlockGradientNorms(self):
        frame = small_dataset(1, seed=4)[0]
        model = JointModel.init(0, ModelConfig(ns=2, channels=(4, 4, 4)))
        norms = block_gradient_norms(model, frame, TrainConfig())
        self.assertEqual(len(norms), 2)
        self.assertTrue(all(n > 0 for n in norms))

    @acceptance
    def testEveryBlockLearnsAtFullDepth(self):
        frame = generate_frame(small_preset((64, 192)), 0, 0)
        model = JointModel.init(0, ModelConfig(ns=4, channels=(8, 8, 8)))
        norms = block_gradient_norms(model, frame, TrainConfig())
        self.assertEqual(len(norms), 4)
        self.assertTrue(all(n > 0 for n in norms))


def acceptance_settings():
    '''
    200 training and 50 evaluation frames at the default frame size with
    10% ground-truth outliers, three seeds, 30 + 20 epochs.
    '''
    preset = ScenePreset(corruption=CorruptionConfig(outlier_rate=0.1))
    frames = [generate_frame(preset, 0, i) for i in range(250)]
    return ExperimentSettings(frames, seeds=ACCEPTANCE_SEEDS, epochs=30, stage2_epochs=20, eval_frames=50, workers=4)


def median_epochs(values):
    '''
    Median of epochs_to_reach results, a curve that never gets there
    counting as later than any other.
    '''
    return float(np.median([np.inf if v is None else v for v in values]))


@acceptance
class LossDirectionTests(BaseTestCase):

    @classmethod
    def setUpClass(cls):
        cls.result = LossAblation(acceptance_settings()).run()

    def testUncertaintyLossBeatsMse(self):
        mse = self.result.median('mse', 'mae_clean_mm')
        ud = self.result.median('ud', 'mae_clean_mm')
        self.assertLessEqual(ud, 0.95 * mse)

    def testUncertaintyLossConvergesNoSlower(self):
        mse = [self.result.summary['seed%d_mse_epochs_to_final' % seed] for seed in ACCEPTANCE_SEEDS]
        ud = [self.result.summary['seed%d_ud_epochs_to_mse_final' % seed] for seed in ACCEPTANCE_SEEDS]
        self.assertLessEqual(median_epochs(ud), median_epochs(mse))

    def testCurvesAreWritten(self):
        out_dir = self.mkdtemp()
        self.result.write(out_dir)
        for variant in ('mse', 'ud'):
            self.assertTrue(os.path.isfile(os.path.join(out_dir, '%s_seed0.csv' % variant)))


@acceptance
class ResidualDirectionTests(BaseTestCase):

    @classmethod
    def setUpClass(cls):
        cls.result = ResidualAblation(acceptance_settings()).run()

    def testRefinementHelpsUncertainPixels(self):
        before = self.result.median('stage1', 'top_mae_clean_mm')
        after = self.result.median('ur', 'top_mae_clean_mm')
        self.assertLess(after, before)

    def testRefinementKeepsOverallMae(self):
        before = self.result.median('stage1', 'mae_clean_mm')
        after = self.result.median('ur', 'mae_clean_mm')
        self.assertLessEqual(after, 1.02 * before)

    def testBalancedLossRmse(self):
        ur = self.result.median('ur', 'rmse_clean_mm')
        urb = self.result.median('urb', 'rmse_clean_mm')
        self.assertLessEqual(urb, ur)
