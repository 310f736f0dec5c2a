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
Tests for the completion blocks, the joint and residual networks and checkpoints
'''
import os
from collections import OrderedDict
import numpy as np
from common import BaseTestCase, SMALL_SIZE, random_guide, random_sparse, random_depth, small_dataset
from udepth.core import InvalidArgument, CheckpointError
from udepth.autodiff import attach_loss, add, grad_check, save_params
from udepth.grid import DepthGrid, ResidualGrid, build_pyramid, downsample_sparse_max
from udepth.losses import LossConfig, loss_ud, loss_urb, loss_multiscale
from udepth.model import ModelConfig, JointModel, ResidualNet, Pipeline
from udepth.model import forward_block, forward_joint, forward_residual, compose_final, init_params
from udepth.model import save_model, load_model, params_equal, DEPTH_FLOOR, S_BOUND
from udepth.model.layers import glorot_bound

GRAD_TOL = 1e-4
INSTANCES = 20
COORDS_PER_PARAM = 2


def small_config(**kwargs):
    values = dict(ns=2, channels=(4, 4, 4), residual_channels=(4, 4))
    values.update(kwargs)
    return ModelConfig(**values)


def joint_objective(model, name, frame, cfg):
    '''
    :return: scalar function of one parameter tensor: the weighted
        multiscale ud loss of a frame against its semi-dense ground truth
    '''
    ns = model.config.ns
    pyramid = build_pyramid(frame.guide, frame.sparse, ns)
    targets = [frame.gt_semi] + [downsample_sparse_max(frame.gt_semi, 2 ** k) for k in range(1, ns)]

    def func(tensor):
        weights = model.weights()
        weights[name] = tensor
        outputs = model.forward_tensors(weights, pyramid)
        per_scale = []
        for k in range(ns):
            depth, s = outputs[ns - 1 - k]
            per_scale.append(loss_ud(depth.data[0, 0], targets[k], s.data[0, 0], targets[k], cfg))
        _, weighted = loss_multiscale(per_scale, cfg)
        root = None
        for k, term in enumerate(weighted):
            depth, s = outputs[ns - 1 - k]
            node = attach_loss((depth, s), term.value, (term.grad_pred[None, None], term.grad_s[None, None]))
            root = node if root is None else add(root, node)
        return root
    return func


def residual_objective(net, name, stage1, s1, frame, epoch):
    def func(tensor):
        weights = net.weights()
        weights[name] = tensor
        residual = net.forward(weights, net.input_tensor(stage1, frame.guide, frame.sparse))
        term = loss_urb(epoch, residual.data[0, 0], stage1, frame.gt_semi, s1, frame.gt_semi)
        return attach_loss((residual,), term.value, (term.grad_pred[None, None],))
    return func


class ModelConfigTests(BaseTestCase):

    def testDefaults(self):
        config = ModelConfig()
        self.assertEqual(config.ns, 4)
        self.assertEqual(config.channels, (16, 32, 64))
        self.assertEqual(config.block_in_channels, 4)
        self.assertEqual(config.residual_in_channels, 4)

    def testArchRoundTrip(self):
        config = small_config(guide_channels=3, residual_inputs=('guide', 'stage1'), uncertainty=False)
        parsed, kind = ModelConfig.from_arch(config.to_arch('residual'))
        self.assertEqual(kind, 'residual')
        self.assertEqual(parsed, config)

    def testBadArch(self):
        with self.assertRaises(CheckpointError):
            ModelConfig.from_arch('kind=joint;depth=3')
        with self.assertRaises(CheckpointError):
            ModelConfig.from_arch('kind=tree;ns=2')

    def testValidation(self):
        with self.assertRaises(InvalidArgument):
            ModelConfig(ns=5)
        with self.assertRaises(InvalidArgument):
            ModelConfig(kernel=4)
        with self.assertRaises(InvalidArgument):
            ModelConfig(residual_inputs=('guide', 'normals'))
        with self.assertRaises(InvalidArgument):
            ModelConfig(guide_channels=2)

    def testFrameDivisibility(self):
        config = ModelConfig(ns=4)
        config.check_frame((64, 192))
        with self.assertRaises(InvalidArgument):
            config.check_frame((16, 48))


class InitTests(BaseTestCase):

    def testSameSeedSameParams(self):
        config = small_config()
        self.assertTrue(params_equal(init_params(3, config), init_params(3, config)))
        self.assertFalse(params_equal(init_params(3, config), init_params(4, config)))

    def testGlorotBound(self):
        for name, value in init_params(0, small_config()).items():
            if name.endswith('.b'):
                self.assertTrue(np.all(value == 0), name)
            else:
                self.assertLessEqual(np.abs(value).max(), glorot_bound(value.shape), name)
                self.assertGreater(np.abs(value).max(), 0.0, name)

    def testResidualHeadIsZero(self):
        params = init_params(0, small_config(), 'residual')
        self.assertTrue(np.all(params['res.head.w'] == 0))
        self.assertTrue(np.all(params['res.head.b'] == 0))

    def testCoarsestBlockKernel(self):
        params = init_params(0, small_config(ns=2))
        self.assertEqual(params['block1.enc1.w'].shape[2:], (5, 5))
        self.assertEqual(params['block0.enc1.w'].shape[2:], (3, 3))
        self.assertEqual(params['block1.dec1.w'].shape[2:], (3, 3))

    def testParamsAreFrozen(self):
        model = JointModel.init(0, small_config())
        with self.assertRaises(ValueError):
            model.params['block0.enc1.w'][0, 0, 0, 0] = 1.0

    def testWrongParams(self):
        params = init_params(0, small_config())
        params.pop('block0.head_s.w')
        with self.assertRaises(InvalidArgument):
            JointModel(small_config(), params)


class ForwardTests(BaseTestCase):

    def setUp(self):
        super(ForwardTests, self).setUp()
        self.guide = random_guide(self.rng, SMALL_SIZE)
        self.sparse = random_sparse(self.rng, SMALL_SIZE, 0.05)

    def testBlockShapesAndPositivity(self):
        model = JointModel.init(1, small_config(ns=1))
        depth, s = forward_block(model, 0, self.guide, self.sparse)
        self.assertEqual(depth.shape, SMALL_SIZE)
        self.assertEqual(s.shape, SMALL_SIZE)
        self.assertTrue(np.all(depth.depth >= DEPTH_FLOOR))

    def testLogVarClampedUnderStress(self):
        model = JointModel.init(2, small_config(ns=1))
        for factor in (10.0, 100.0, -100.0):
            params = OrderedDict((n, v * factor) for n, v in model.params.items())
            stressed = model.with_params(params)
            sparse = random_sparse(self.rng, SMALL_SIZE, 0.5, 1.0, 1e4)
            depth, s = forward_block(stressed, 0, self.guide, sparse)
            self.assertTrue(np.all(np.abs(s.s) <= S_BOUND))
            self.assertTrue(np.all(depth.depth > 0))

    def testFinerBlockNeedsPrior(self):
        model = JointModel.init(0, small_config(ns=2))
        with self.assertRaises(InvalidArgument):
            forward_block(model, 0, self.guide, self.sparse)

    def testPriorDimMismatch(self):
        model = JointModel.init(0, small_config(ns=2))
        with self.assertRaises(InvalidArgument):
            forward_block(model, 0, self.guide, self.sparse, DepthGrid(np.ones((8, 24))))

    def testSingleScaleIsOneBlock(self):
        model = JointModel.init(5, small_config(ns=1))
        outputs = forward_joint(model, build_pyramid(self.guide, self.sparse, 1))
        depth, s = forward_block(model, 0, self.guide, self.sparse)
        self.assertEqual(len(outputs), 1)
        self.assertArrayEqual(outputs[0][0].depth, depth.depth)
        self.assertArrayEqual(outputs[0][1].s, s.s)

    def testJointOrderingAndDims(self):
        model = JointModel.init(5, small_config(ns=2))
        outputs = forward_joint(model, build_pyramid(self.guide, self.sparse, 2))
        self.assertEqual([d.shape for d, _ in outputs], [(8, 24), SMALL_SIZE])

    def testJointLevelMismatch(self):
        model = JointModel.init(5, small_config(ns=2))
        with self.assertRaises(InvalidArgument):
            forward_joint(model, build_pyramid(self.guide, self.sparse, 1))

    def testJointIsDeterministic(self):
        model = JointModel.init(5, small_config(ns=2))
        pyramid = build_pyramid(self.guide, self.sparse, 2)
        first, second = forward_joint(model, pyramid), forward_joint(model, pyramid)
        self.assertArrayEqual(first[-1][0].depth, second[-1][0].depth)

    def testStrippedModel(self):
        model = JointModel.init(5, small_config(ns=1))
        stripped = model.strip_uncertainty()
        self.assertFalse(any('head_s' in name for name in stripped.params))
        depth, s = forward_block(stripped, 0, self.guide, self.sparse)
        self.assertArrayEqual(depth.depth, forward_block(model, 0, self.guide, self.sparse)[0].depth)
        self.assertTrue(np.all(s.s == 0))

    def testResidualZeroAtInit(self):
        net = ResidualNet.init(0, small_config())
        stage1 = random_depth(self.rng, SMALL_SIZE)
        residual = forward_residual(net, stage1, self.guide, self.sparse)
        self.assertIsInstance(residual, ResidualGrid)
        self.assertEqual(residual.shape, SMALL_SIZE)
        self.assertTrue(np.all(residual.residual == 0))
        self.assertArrayEqual(compose_final(stage1, residual).depth, stage1.depth)

    def testResidualInputSubsets(self):
        stage1 = random_depth(self.rng, SMALL_SIZE)
        for inputs, channels in ((('guide',), 1), (('stage1',), 1), (('sparse',), 2), (('guide', 'stage1'), 2)):
            net = ResidualNet.init(0, small_config(residual_inputs=inputs))
            self.assertEqual(net.input_tensor(stage1, self.guide, self.sparse).shape[1], channels)

    def testResidualDimMismatch(self):
        net = ResidualNet.init(0, small_config())
        with self.assertRaises(InvalidArgument):
            forward_residual(net, DepthGrid(np.ones((8, 8))), self.guide, self.sparse)

    def testComposeFinal(self):
        self.assertArrayAlmostEqual(compose_final(DepthGrid([[5.0]]), ResidualGrid([[-0.5]])).depth, [[4.5]])
        self.assertArrayEqual(compose_final(DepthGrid([[0.01]]), ResidualGrid([[-1.0]])).depth, [[DEPTH_FLOOR]])
        with self.assertRaises(InvalidArgument):
            compose_final(DepthGrid([[1.0]]), ResidualGrid([[0.0, 1.0]]))


class NetworkGradientTests(BaseTestCase):
    '''
    Every parameter of both networks against central differences, one
    init seed and frame per instance. Coordinates sitting on a relu or
    maxpool kink are detected from their one-sided differences.
    '''

    def setUp(self):
        super(NetworkGradientTests, self).setUp()
        self.frames = small_dataset(4, seed=3)

    def coords(self, shape, count=COORDS_PER_PARAM):
        size = int(np.prod(shape))
        return self.rng.choice(size, size=min(count, size), replace=False)

    def check(self, func, value, label):
        err = grad_check(func, value, coords=self.coords(value.shape), kink_tol=GRAD_TOL)
        self.assertLess(err, GRAD_TOL, label)

    def testJointNetwork(self):
        cfg = LossConfig.default(2)
        for seed in range(INSTANCES):
            model = JointModel.init(seed, small_config(ns=2))
            frame = self.frames[seed % len(self.frames)]
            for name in model.params:
                func = joint_objective(model, name, frame, cfg)
                self.check(func, model.params[name], 'seed %d %s' % (seed, name))

    def testResidualNetwork(self):
        for seed in range(INSTANCES):
            rng = np.random.default_rng(seed)
            net = ResidualNet.init(seed, small_config())
            params = OrderedDict(net.params)
            params['res.head.w'] = rng.normal(0, 0.3, params['res.head.w'].shape)
            net = net.with_params(params)
            frame = self.frames[seed % len(self.frames)]
            stage1 = DepthGrid(np.maximum(frame.gt_clean.depth + rng.normal(0, 1, SMALL_SIZE), 1.0))
            s1 = rng.uniform(-1, 1, SMALL_SIZE)
            # both halves of the balanced schedule
            epoch = seed % 2
            for name in net.params:
                func = residual_objective(net, name, stage1, s1, frame, epoch)
                self.check(func, net.params[name], 'seed %d epoch %d %s' % (seed, epoch, name))


class ModelCheckpointTests(BaseTestCase):

    def testSaveLoad(self):
        path = os.path.join(self.mkdtemp(), 'joint.ckpt')
        model = JointModel.init(1, small_config())
        save_model(path, model)
        loaded = load_model(path, 'joint')
        self.assertIsInstance(loaded, JointModel)
        self.assertEqual(loaded.config, model.config)
        self.assertTrue(params_equal(loaded.params, model.params))

    def testKindMismatch(self):
        path = os.path.join(self.mkdtemp(), 'res.ckpt')
        save_model(path, ResidualNet.init(1, small_config()))
        with self.assertRaises(CheckpointError):
            load_model(path, 'joint')

    def testShapeMismatch(self):
        path = os.path.join(self.mkdtemp(), 'bad.ckpt')
        model = JointModel.init(1, small_config())
        save_params(path, model.params, small_config(channels=(8, 8, 8)).to_arch('joint'))
        with self.assertRaises(CheckpointError):
            load_model(path)

    def testMissingFile(self):
        with self.assertRaises(IOError):
            load_model(os.path.join(self.mkdtemp(), 'none.ckpt'))

    def testPipeline(self):
        tmp = self.mkdtemp()
        joint = JointModel.init(1, small_config())
        residual = ResidualNet.init(2, small_config())
        save_model(os.path.join(tmp, 'a.ckpt'), joint)
        save_model(os.path.join(tmp, 'b.ckpt'), residual)
        pipeline = Pipeline.load(os.path.join(tmp, 'a.ckpt'), os.path.join(tmp, 'b.ckpt'))
        frame = small_dataset(1)[0]
        prediction = pipeline.predict(frame.guide, frame.sparse)
        self.assertArrayEqual(prediction.final.depth, prediction.stage1.depth)
        self.assertEqual(prediction.s1.shape, SMALL_SIZE)
