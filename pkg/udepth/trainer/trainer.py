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
Two-step training and evaluation runs.

Step one trains the multiscale joint prediction network against the
semi-dense ground truth of every scale (a weighted sum of the
per-scale losses). Step two freezes it and trains the residual refinement
network with the uncertainty-attention losses.

Every frame of a batch is recorded on its own tape; the frame gradients
are averaged in batch order, then one ADAM step is taken.
'''
import math
from collections import OrderedDict
import numpy as np
from udepth.core import InvalidArgument, UdepthObject, kassert, make_rng, run_parallel
from udepth.autodiff import Tape, attach_loss, add
from udepth.grid import build_pyramid, downsample_sparse_max, count_valid
from udepth.losses import LossConfig, MaskedLossValue, loss_ud, loss_mse, loss_multiscale
from udepth.losses import loss_residual, residual_family
from udepth.metrics import MetricReport, evaluate
from udepth.model import JointModel, ResidualNet, Pipeline
from udepth.trainer.optim import OptimState, adam_step
from udepth.trainer.log import EpochRecord, TrainLog


def _as_4d(grad):
    return None if grad is None else grad[np.newaxis, np.newaxis]


def _mean_gradients(results, names):
    '''
    :param results: list of (loss, GradientMap), in batch order
    :return: OrderedDict name -> mean gradient
    '''
    count = float(len(results))
    mean = OrderedDict()
    for name in names:
        total = results[0][1][name].copy()
        for _, grads in results[1:]:
            total += grads[name]
        mean[name] = total / count
    return mean


def eval_run(pipeline, dataset, against='clean', workers=1):
    '''
    Mean of the per-frame metrics of a pipeline over a dataset.

    :type pipeline: :class:`~udepth.model.Pipeline`
    :param dataset: iterable of :class:`~udepth.lidarsim.Frame`
    :param against: 'clean' or 'semi' ground truth
    :param workers: evaluation threads (default: 1)
    :rtype: :class:`~udepth.metrics.MetricReport` (per-frame reports in ``frames``)
    '''
    kassert.is_in(against, ('clean', 'semi'))
    frames = list(dataset)
    if not frames:
        raise InvalidArgument('cannot evaluate on an empty dataset')

    def evaluate_frame(frame):
        prediction = pipeline.predict(frame.guide, frame.sparse)
        return evaluate(prediction.final, frame.target(against))
    return MetricReport.mean_of(run_parallel([(evaluate_frame, (f,)) for f in frames], workers))


class Trainer(UdepthObject):
    '''
    Base class of both training steps.
    Subclasses implement :func:`frame_gradients` and :func:`pipeline`.
    '''

    stage = None

    def __init__(self, config, dataset, model, eval_set=None, logger=None):
        '''
        :type config: :class:`~udepth.trainer.config.TrainConfig`
        :param dataset: :class:`~udepth.lidarsim.Dataset` (or list of frames)
        :param model: network trained by this step
        :param eval_set: evaluation frames (default: the last ``config.eval_frames`` frames of dataset,
            or the training frames when eval_frames is 0)
        :param logger: logger (default: the udepth logger)
        '''
        super(Trainer, self).__init__('Stage%sTrainer' % self.stage.capitalize(), logger)
        if config.stage != self.stage:
            raise InvalidArgument('configuration is for stage %s, trainer is for stage %s' % (config.stage, self.stage))
        frames = list(dataset)
        if not frames:
            raise InvalidArgument('cannot train on an empty dataset')
        if eval_set is None:
            if config.eval_frames >= len(frames):
                raise InvalidArgument('eval_frames=%d leaves no training frame' % config.eval_frames)
            cut = len(frames) - config.eval_frames
            eval_set = frames[cut:] if config.eval_frames else frames
            frames = frames[:cut]
        self.config = config
        self.frames = frames
        self.eval_set = list(eval_set)
        self.model = model
        self.log = TrainLog(self.stage)

    def frame_gradients(self, frame, epoch):
        '''
        :return: (loss value, GradientMap) of one frame
        '''
        self.not_implemented('frame_gradients')

    def pipeline(self):
        '''
        :return: the :class:`~udepth.model.Pipeline` evaluated after every epoch
        '''
        self.not_implemented('pipeline')

    def family(self, epoch):
        return self.config.loss_name

    def zero_gradients(self):
        '''
        :return: zero gradients of every parameter (frames without supervision)
        '''
        return OrderedDict((name, np.zeros(value.shape)) for name, value in self.model.params.items())

    def batches(self, epoch):
        '''
        :return: list of frame lists, shuffled by a stream of (seed, epoch)
        '''
        order = make_rng(self.config.seed, 'shuffle', epoch).permutation(len(self.frames))
        size = self.config.batch
        return [[self.frames[i] for i in order[start:start + size]] for start in range(0, len(order), size)]

    def train(self):
        '''
        :return: (trained network, :class:`~udepth.trainer.log.TrainLog`)
        '''
        config = self.config
        state = OptimState(self.model.params, lr=config.base_lr)
        self.logger.info('stage %s: %d training frames, %d eval frames, %d parameters, loss %s' % (
            self.stage, len(self.frames), len(self.eval_set), self.model.num_params(), config.loss_name))
        for epoch in range(config.epochs):
            lr = config.lr_at(epoch)
            losses = []
            for index, batch in enumerate(self.batches(epoch)):
                jobs = [(self.frame_gradients, (frame, epoch)) for frame in batch]
                results = run_parallel(jobs, config.workers)
                grads = _mean_gradients(results, self.model.params)
                self.model = self.model.with_params(adam_step(state, self.model.params, grads, lr))
                losses.extend(loss for loss, _ in results)
                self.logger.debug('epoch %d batch %d: loss %.6f' % (epoch, index, math.fsum(l for l, _ in results) / len(results)))
            pipeline = self.pipeline()
            record = EpochRecord(
                epoch, math.fsum(losses) / len(losses),
                eval_run(pipeline, self.eval_set, 'clean', config.workers),
                eval_run(pipeline, self.eval_set, 'semi', config.workers),
                self.family(epoch), lr)
            self.log.append(record)
            self.logger.info('epoch %d: loss=%.6f family=%s lr=%g mae_clean_mm=%.2f rmse_clean_mm=%.2f' % (
                epoch, record.loss, record.family, lr, record.clean.mae_mm, record.clean.rmse_mm))
        return self.model, self.log


class Stage1Trainer(Trainer):
    '''
    Multiscale joint prediction step.
    '''

    stage = 'one'

    def __init__(self, config, dataset, model, eval_set=None, logger=None):
        kassert.is_of_types(model, JointModel)
        super(Stage1Trainer, self).__init__(config, dataset, model, eval_set, logger)
        ns = model.config.ns
        if len(config.scale_weights) < ns:
            raise InvalidArgument('%d scale weights for ns=%d' % (len(config.scale_weights), ns))
        self.loss_config = LossConfig(config.jeffrey, config.scale_weights[:ns])
        if config.loss_name == 'ud' and not model.config.uncertainty:
            raise InvalidArgument('the ud loss needs a model with uncertainty heads')

    def pipeline(self):
        return Pipeline(self.model)

    def scale_loss(self, depth, s, gt):
        '''
        :return: MaskedLossValue of one scale, zero when the scale has no valid ground truth
        '''
        pred = depth.data[0, 0]
        if count_valid(gt) == 0:
            grad_s = None if s is None else np.zeros(pred.shape)
            return MaskedLossValue(0.0, 0, np.zeros(pred.shape), grad_s, self.config.loss_name)
        if self.config.loss_name == 'ud':
            return loss_ud(pred, gt, s.data[0, 0], gt, self.loss_config)
        return loss_mse(pred, gt, gt)

    def frame_gradients(self, frame, epoch):
        ns = self.model.config.ns
        pyramid = build_pyramid(frame.guide, frame.sparse, ns)
        tape = Tape()
        outputs = self.model.forward_tensors(self.model.weights(tape), pyramid)
        per_scale = []
        for k in range(ns):
            depth, s = outputs[ns - 1 - k]
            gt = frame.gt_semi if k == 0 else downsample_sparse_max(frame.gt_semi, 2 ** k)
            per_scale.append(self.scale_loss(depth, s, gt))
            if per_scale[-1].n_valid == 0:
                self.logger.debug('%s: no valid ground truth at scale %d, skipped' % (frame.name, k))
        total, weighted = loss_multiscale(per_scale, self.loss_config)
        root = None
        for k, term in enumerate(weighted):
            if term.n_valid == 0:
                continue
            depth, s = outputs[ns - 1 - k]
            if s is None or term.grad_s is None:
                node = attach_loss((depth,), term.value, (_as_4d(term.grad_pred),))
            else:
                node = attach_loss((depth, s), term.value, (_as_4d(term.grad_pred), _as_4d(term.grad_s)))
            root = node if root is None else add(root, node)
        if root is None:
            return total, self.zero_gradients()
        return total, tape.backward(root)


class Stage2Trainer(Trainer):
    '''
    Uncertainty-attention residual refinement step on a frozen first step.
    '''

    stage = 'two'

    def __init__(self, config, dataset, stage1_model, model, eval_set=None, logger=None):
        kassert.is_of_types(stage1_model, JointModel)
        kassert.is_of_types(model, ResidualNet)
        super(Stage2Trainer, self).__init__(config, dataset, model, eval_set, logger)
        self.stage1_model = stage1_model
        self.loss_config = LossConfig(config.jeffrey, epoch_balanced=config.loss_name == 'urb')
        frozen = Pipeline(stage1_model)
        self._stage1 = {}
        for frame in self.frames:
            self._stage1[frame.name] = frozen.stage1(frame.guide, frame.sparse)

    def family(self, epoch):
        return residual_family('urb' if self.loss_config.epoch_balanced else 'ur', epoch)

    def pipeline(self):
        return Pipeline(self.stage1_model, self.model)

    def frame_gradients(self, frame, epoch):
        depth, s1 = self._stage1[frame.name]
        gt = frame.gt_semi
        if count_valid(gt) == 0:
            self.logger.debug('%s: no valid ground truth, skipped' % frame.name)
            return 0.0, self.zero_gradients()
        tape = Tape()
        residual = self.model.forward(self.model.weights(tape), self.model.input_tensor(depth, frame.guide, frame.sparse))
        pred = residual.data[0, 0]
        term = loss_residual(epoch, pred, depth, gt, s1, gt, self.loss_config)
        root = attach_loss((residual,), term.value, (_as_4d(term.grad_pred),))
        return term.value, tape.backward(root)


def train_stage1(config, dataset, model, eval_set=None):
    '''
    :return: (trained JointModel, TrainLog)
    '''
    return Stage1Trainer(config, dataset, model, eval_set).train()


def train_stage2(config, dataset, stage1_model, residual_model, eval_set=None):
    '''
    :return: (trained ResidualNet, TrainLog); stage1_model is left untouched
    '''
    return Stage2Trainer(config, dataset, stage1_model, residual_model, eval_set).train()
