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
Tests for the optimiser, training configuration, logs and both training steps
'''
import os
from collections import OrderedDict
import numpy as np
from common import BaseTestCase, SMALL_SIZE, small_dataset, small_preset, acceptance
from udepth.core import InvalidArgument
from udepth.grid import SparseDepthGrid
from udepth.lidarsim import Frame, Dataset, generate_frame
from udepth.metrics import MetricReport
from udepth.model import ModelConfig, JointModel, ResidualNet, Pipeline, params_equal
from udepth.trainer import OptimState, adam_step, TrainConfig, load_configs, split_assignments
from udepth.trainer import TrainLog, EpochRecord, COLUMNS
from udepth.trainer import Stage1Trainer, Stage2Trainer, train_stage1, train_stage2, eval_run


def small_model_config(**kwargs):
    values = dict(ns=2, channels=(4, 4, 4), residual_channels=(4, 4))
    values.update(kwargs)
    return ModelConfig(**values)


def report(value):
    return MetricReport(value, value, value, value, 1)


class AdamTests(BaseTestCase):

    def testFirstStep(self):
        params = OrderedDict([('w', np.array([0.5, -0.5]))])
        state = OptimState(params, lr=1e-4)
        updated = adam_step(state, params, {'w': np.array([1.0, -3.0])})
        self.assertArrayAlmostEqual(updated['w'], [0.5 - 1e-4, -0.5 + 1e-4], tol=1e-11)
        self.assertEqual(state.step, 1)
        self.assertArrayEqual(params['w'], [0.5, -0.5])

    def testZeroGradient(self):
        params = OrderedDict([('w', self.rng.normal(size=(2, 3)))])
        state = OptimState(params, lr=1e-3)
        for _ in range(3):
            updated = adam_step(state, params, {'w': np.zeros((2, 3))})
            self.assertArrayEqual(updated['w'], params['w'])

    def testDeterministic(self):
        params = OrderedDict([('a', self.rng.normal(size=4)), ('b', self.rng.normal(size=(2, 2)))])
        grads = [OrderedDict((n, self.rng.normal(size=v.shape)) for n, v in params.items()) for _ in range(5)]
        results = []
        for _ in range(2):
            state = OptimState(params, lr=1e-3)
            current = params
            for g in grads:
                current = adam_step(state, current, g)
            results.append(current)
        self.assertTrue(params_equal(results[0], results[1]))

    def testStepLearningRate(self):
        params = OrderedDict([('w', np.zeros(1))])
        updated = adam_step(OptimState(params, lr=1e-4), params, {'w': np.ones(1)}, lr=1e-2)
        self.assertAlmostEqual(updated['w'][0], -1e-2, places=9)

    def testMismatch(self):
        params = OrderedDict([('w', np.zeros(3))])
        state = OptimState(params)
        with self.assertRaises(InvalidArgument):
            adam_step(state, params, {'w': np.zeros(4)})
        with self.assertRaises(InvalidArgument):
            adam_step(state, OrderedDict([('v', np.zeros(3))]), {'v': np.zeros(3)})
        with self.assertRaises(InvalidArgument):
            OptimState(params, lr=0.0)


class TrainConfigTests(BaseTestCase):

    def testStageDefaults(self):
        one = TrainConfig()
        self.assertEqual(one.base_lr, 1e-4)
        self.assertEqual(one.loss_name, 'ud')
        two = TrainConfig(stage='two')
        self.assertEqual(two.base_lr, 2e-4)
        self.assertEqual(two.loss_name, 'urb')
        self.assertEqual(TrainConfig(lr=1e-3).base_lr, 1e-3)

    def testLearningRateSchedule(self):
        config = TrainConfig(lr=1e-3)
        self.assertEqual(config.lr_at(0), 1e-3)
        self.assertEqual(config.lr_at(9), 1e-3)
        self.assertEqual(config.lr_at(10), 5e-4)
        self.assertEqual(config.lr_at(25), 2.5e-4)

    def testValidation(self):
        with self.assertRaises(InvalidArgument):
            TrainConfig(stage='two', loss='ud')
        with self.assertRaises(InvalidArgument):
            TrainConfig(loss='urb')
        with self.assertRaises(InvalidArgument):
            TrainConfig(epochs=0)
        with self.assertRaises(InvalidArgument):
            TrainConfig(lr=-1.0)
        with self.assertRaises(InvalidArgument):
            TrainConfig(stage='three')

    def testSplitAssignments(self):
        train, model = split_assignments(['epochs=2', 'ns=1', 'jeffrey=0', 'channels=4,4,4'])
        self.assertEqual(train, ['epochs=2', 'jeffrey=0'])
        self.assertEqual(model, ['ns=1', 'channels=4,4,4'])
        with self.assertRaises(InvalidArgument):
            split_assignments(['depth=3'])

    def testLoadConfigs(self):
        path = os.path.join(self.mkdtemp(), 'train.cfg')
        with open(path, 'w') as f:
            f.write('# fast run\nstage=one\nepochs=5\n\nns=2\nchannels=4,8,8\nscale_weights=1,0.5\n')
        train, model = load_configs(path, ['epochs=3', 'uncertainty=no'])
        self.assertEqual(train.epochs, 3)
        self.assertEqual(train.scale_weights, (1.0, 0.5))
        self.assertEqual(model.ns, 2)
        self.assertEqual(model.channels, (4, 8, 8))
        self.assertFalse(model.uncertainty)

    def testLoadDefaults(self):
        train, model = load_configs()
        self.assertEqual(train, TrainConfig())
        self.assertEqual(model, ModelConfig())

    def testBadValue(self):
        with self.assertRaises(InvalidArgument):
            load_configs(overrides=['epochs=many'])


class TrainLogTests(BaseTestCase):

    def testAppendOrder(self):
        log = TrainLog('one')
        log.append(EpochRecord(0, 1.0, report(1.0), report(2.0), 'ud', 1e-4))
        with self.assertRaises(InvalidArgument):
            log.append(EpochRecord(2, 1.0, report(1.0), report(2.0), 'ud', 1e-4))

    def testCsv(self):
        log = TrainLog('two')
        log.append(EpochRecord(0, 3.5, report(100.0), report(120.0), 'ur', 2e-4))
        log.append(EpochRecord(1, 2.5, report(90.0), report(110.0), 'urb', 2e-4))
        path = os.path.join(self.mkdtemp(), 'log.csv')
        log.write_csv(path)
        with open(path) as f:
            self.assertEqual(f.readline().strip(), ','.join(COLUMNS))
        rows = TrainLog.read_rows(path)
        self.assertEqual(len(rows), 2)
        self.assertEqual(rows[1]['family'], 'urb')
        self.assertEqual(float(rows[0]['mae_clean_mm']), 100.0)
        self.assertEqual(float(rows[1]['mae_semi_mm']), 110.0)
        self.assertEqual(log.curve('loss'), [3.5, 2.5])
        self.assertEqual(log.families(), ['ur', 'urb'])
        with self.assertRaises(InvalidArgument):
            log.curve('family')


class Stage1TrainerTests(BaseTestCase):

    def setUp(self):
        super(Stage1TrainerTests, self).setUp()
        self.dataset = small_dataset(2, seed=5)
        self.model = JointModel.init(0, small_model_config())

    def testSingleEpoch(self):
        trained, log = train_stage1(TrainConfig(epochs=1, batch=2), self.dataset, self.model)
        self.assertEqual(len(log), 1)
        record = log.records[0]
        self.assertEqual(record.epoch, 0)
        self.assertEqual(record.family, 'ud')
        self.assertEqual(record.lr, 1e-4)
        self.assertTrue(np.isfinite(record.loss))
        self.assertGreater(record.clean.n_valid, 0)
        self.assertFalse(params_equal(trained.params, self.model.params))
        self.assertEqual(trained.config, self.model.config)

    def testRunsAreDeterministic(self):
        config = TrainConfig(epochs=2, batch=1, seed=3)
        first, log1 = train_stage1(config, self.dataset, self.model)
        second, log2 = train_stage1(config, self.dataset, self.model)
        self.assertTrue(params_equal(first.params, second.params))
        self.assertEqual([r.row() for r in log1], [r.row() for r in log2])

    def testParallelFramesMatchSerial(self):
        serial, _ = train_stage1(TrainConfig(epochs=1, batch=2, workers=1), self.dataset, self.model)
        parallel, _ = train_stage1(TrainConfig(epochs=1, batch=2, workers=2), self.dataset, self.model)
        self.assertTrue(params_equal(serial.params, parallel.params))

    def testGradientReachesEveryBlock(self):
        trainer = Stage1Trainer(TrainConfig(), self.dataset, self.model)
        loss, grads = trainer.frame_gradients(self.dataset[0], 0)
        self.assertTrue(np.isfinite(loss))
        for level in range(2):
            for layer in ('enc1', 'dec1', 'head_depth', 'head_s'):
                name = 'block%d.%s.w' % (level, layer)
                self.assertGreater(np.abs(grads[name]).max(), 0.0, name)

    def testMseLeavesLogVarHeadUntouched(self):
        trainer = Stage1Trainer(TrainConfig(loss='mse'), self.dataset, self.model)
        _, grads = trainer.frame_gradients(self.dataset[0], 0)
        self.assertTrue(np.all(grads['block0.head_s.w'] == 0))
        self.assertTrue(np.all(grads['block1.head_s.b'] == 0))
        self.assertGreater(np.abs(grads['block0.head_depth.w']).max(), 0.0)

    def testUdNeedsUncertainty(self):
        model = JointModel.init(0, small_model_config(uncertainty=False))
        with self.assertRaises(InvalidArgument):
            Stage1Trainer(TrainConfig(loss='ud'), self.dataset, model)
        Stage1Trainer(TrainConfig(loss='mse'), self.dataset, model)

    def testEmptyGroundTruth(self):
        frame = self.dataset[0]
        empty = Frame('empty', frame.guide, frame.sparse, SparseDepthGrid(np.zeros(SMALL_SIZE)), frame.gt_clean)
        trainer = Stage1Trainer(TrainConfig(), [empty], self.model)
        loss, grads = trainer.frame_gradients(empty, 0)
        self.assertEqual(loss, 0.0)
        self.assertTrue(all(np.all(g == 0) for g in grads.values()))

    def testStageMismatch(self):
        with self.assertRaises(InvalidArgument):
            Stage1Trainer(TrainConfig(stage='two'), self.dataset, self.model)
        with self.assertRaises(InvalidArgument):
            Stage1Trainer(TrainConfig(), [], self.model)

    def testTooFewScaleWeights(self):
        with self.assertRaises(InvalidArgument):
            Stage1Trainer(TrainConfig(scale_weights=(1.0,)), self.dataset, self.model)

    def testEvalHoldout(self):
        dataset = small_dataset(3, seed=1)
        trainer = Stage1Trainer(TrainConfig(eval_frames=1), dataset, self.model)
        self.assertEqual([f.name for f in trainer.frames], [f.name for f in dataset.frames[:2]])
        self.assertEqual([f.name for f in trainer.eval_set], [dataset.frames[2].name])
        trainer = Stage1Trainer(TrainConfig(), dataset, self.model)
        self.assertEqual(len(trainer.frames), 3)
        self.assertEqual(len(trainer.eval_set), 3)
        with self.assertRaises(InvalidArgument):
            Stage1Trainer(TrainConfig(eval_frames=3), dataset, self.model)

    def testBatches(self):
        dataset = small_dataset(5, seed=2)
        trainer = Stage1Trainer(TrainConfig(batch=2, seed=4), dataset, self.model)
        batches = trainer.batches(0)
        self.assertEqual([len(b) for b in batches], [2, 2, 1])
        self.assertEqual(sorted(f.name for b in batches for f in b), sorted(f.name for f in dataset))
        self.assertEqual([[f.name for f in b] for b in trainer.batches(0)], [[f.name for f in b] for b in batches])


class Stage2TrainerTests(BaseTestCase):

    def setUp(self):
        super(Stage2TrainerTests, self).setUp()
        self.dataset = small_dataset(2, seed=6)
        self.stage1 = JointModel.init(1, small_model_config())
        self.residual = ResidualNet.init(2, small_model_config())

    def testFamiliesAlternate(self):
        config = TrainConfig(stage='two', epochs=2, batch=2)
        trained, log = train_stage2(config, self.dataset, self.stage1, self.residual)
        self.assertEqual(log.families(), ['ur', 'urb'])
        self.assertEqual(log.stage, 'two')
        self.assertFalse(params_equal(trained.params, self.residual.params))

    def testPlainFamily(self):
        _, log = train_stage2(TrainConfig(stage='two', epochs=2, loss='ur'), self.dataset, self.stage1, self.residual)
        self.assertEqual(log.families(), ['ur', 'ur'])

    def testBalancedLossFollowsConfig(self):
        balanced = Stage2Trainer(TrainConfig(stage='two'), self.dataset, self.stage1, self.residual)
        plain = Stage2Trainer(TrainConfig(stage='two', loss='ur'), self.dataset, self.stage1, self.residual)
        self.assertTrue(balanced.loss_config.epoch_balanced)
        self.assertFalse(plain.loss_config.epoch_balanced)
        # epoch 0 trains both with the L1 form
        self.assertEqual(balanced.frame_gradients(self.dataset[0], 0)[0], plain.frame_gradients(self.dataset[0], 0)[0])
        self.assertNotEqual(balanced.frame_gradients(self.dataset[0], 1)[0], plain.frame_gradients(self.dataset[0], 1)[0])

    def testFirstStepIsFrozen(self):
        before = OrderedDict((n, v.copy()) for n, v in self.stage1.params.items())
        train_stage2(TrainConfig(stage='two', epochs=1), self.dataset, self.stage1, self.residual)
        self.assertTrue(params_equal(before, self.stage1.params))

    def testOnlyResidualParameters(self):
        trainer = Stage2Trainer(TrainConfig(stage='two'), self.dataset, self.stage1, self.residual)
        _, grads = trainer.frame_gradients(self.dataset[0], 1)
        self.assertEqual(list(grads), list(self.residual.params))
        self.assertGreater(np.abs(grads['res.head.w']).max(), 0.0)

    def testWrongModels(self):
        with self.assertRaises(InvalidArgument):
            Stage2Trainer(TrainConfig(stage='two'), self.dataset, self.residual, self.residual)
        with self.assertRaises(InvalidArgument):
            Stage2Trainer(TrainConfig(), self.dataset, self.stage1, self.residual)


class EvalRunTests(BaseTestCase):

    def setUp(self):
        super(EvalRunTests, self).setUp()
        self.dataset = small_dataset(2, seed=7)
        self.pipeline = Pipeline(JointModel.init(0, small_model_config()))

    def testRepeatable(self):
        first = eval_run(self.pipeline, self.dataset)
        self.assertEqual(first, eval_run(self.pipeline, self.dataset))
        self.assertEqual(first, eval_run(self.pipeline, self.dataset, workers=2))
        self.assertEqual(len(first.frames), 2)

    def testAgainst(self):
        clean = eval_run(self.pipeline, self.dataset, 'clean')
        semi = eval_run(self.pipeline, self.dataset, 'semi')
        self.assertGreater(clean.n_valid, semi.n_valid)
        with self.assertRaises(InvalidArgument):
            eval_run(self.pipeline, self.dataset, 'lidar')

    def testEmpty(self):
        with self.assertRaises(InvalidArgument):
            eval_run(self.pipeline, [])


class TrainingDirectionTests(BaseTestCase):

    @acceptance
    def testJointLossDecreases(self):
        preset = small_preset((64, 192))
        dataset = Dataset([generate_frame(preset, 11, i) for i in range(4)])
        model = JointModel.init(0, small_model_config(ns=2, channels=(8, 8, 8)))
        _, log = train_stage1(TrainConfig(epochs=8, batch=2, lr=1e-3), dataset, model)
        losses = log.curve('loss')
        self.assertLess(losses[-1], losses[0])

    @acceptance
    def testRefinementImprovesSemiError(self):
        preset = small_preset((64, 192))
        dataset = Dataset([generate_frame(preset, 12, i) for i in range(4)])
        stage1, _ = train_stage1(TrainConfig(epochs=4, batch=2, lr=1e-3), dataset,
                                 JointModel.init(0, small_model_config(channels=(8, 8, 8))))
        residual = ResidualNet.init(0, small_model_config(channels=(8, 8, 8)))
        before = eval_run(Pipeline(stage1, residual), dataset, 'semi')
        _, log = train_stage2(TrainConfig(stage='two', epochs=6, batch=2, lr=1e-3), dataset, stage1, residual)
        self.assertLess(min(r.semi.mae_mm for r in log), before.mae_mm)
