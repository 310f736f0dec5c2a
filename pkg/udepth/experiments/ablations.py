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
Desk-scale ablation experiments.

Each experiment trains small models on a generated dataset and returns an
:class:`~udepth.experiments.result.ExperimentResult`:

- :func:`loss_ablation`: MSE against the uncertainty loss, with and without the Jeffrey's prior
- :func:`residual_ablation`: first step alone, refined with L_UR and with L_URB
- :func:`ns_sweep`: number of completion blocks
- :func:`residual_input_ablation`: inputs of the refinement network
'''
import numpy as np
from udepth.core import InvalidArgument, UdepthObject, kassert
from udepth.metrics import MetricReport, evaluate_subset, top_fraction_selector
from udepth.model import JointModel, ResidualNet, Pipeline
from udepth.trainer import load_configs, Stage1Trainer, Stage2Trainer
from udepth.experiments.result import ExperimentResult, epochs_to_reach

#: share of the most uncertain pixels evaluated separately
TOP_FRACTION = 0.1
RESIDUAL_INPUT_SETS = (('stage1',), ('guide',), ('guide', 'stage1'), ('guide', 'stage1', 'sparse'))


class ExperimentSettings(object):
    '''
    Shared settings of the experiments.
    '''

    def __init__(self, dataset, seeds=(0, 1, 2), epochs=30, stage2_epochs=20, eval_frames=0, overrides=(), workers=1):
        '''
        :param dataset: :class:`~udepth.lidarsim.Dataset` (or list of frames)
        :param seeds: seeds of the repeated runs
        :param epochs: epochs of the first step
        :param stage2_epochs: epochs of the refinement step
        :param eval_frames: frames held out for evaluation at the end of the dataset
        :param overrides: 'key=value' settings of the training and model configurations
        :param workers: threads per batch
        '''
        frames = list(dataset)
        if not seeds:
            raise InvalidArgument('at least one seed is needed')
        if eval_frames >= len(frames):
            raise InvalidArgument('eval_frames=%d leaves no training frame' % eval_frames)
        cut = len(frames) - eval_frames
        self.train_frames = frames[:cut]
        self.eval_frames = frames[cut:] if eval_frames else frames[:cut]
        self.seeds = tuple(seeds)
        self.epochs = int(epochs)
        self.stage2_epochs = int(stage2_epochs)
        self.overrides = list(overrides)
        self.workers = int(workers)

    def configs(self, stage, seed, *extra):
        '''
        :return: (TrainConfig, ModelConfig) of a run
        '''
        epochs = self.epochs if stage == 'one' else self.stage2_epochs
        base = ['stage=%s' % stage, 'seed=%d' % seed, 'epochs=%d' % epochs, 'workers=%d' % self.workers]
        return load_configs(None, base + self.overrides + list(extra))


def _final_metrics(log):
    last = log.records[-1]
    return {
        'mae_clean_mm': last.clean.mae_mm,
        'rmse_clean_mm': last.clean.rmse_mm,
        'imae': last.clean.imae_per_km,
        'irmse': last.clean.irmse_per_km,
        'mae_semi_mm': last.semi.mae_mm,
    }


def top_uncertainty_report(pipeline, frames, frac=TOP_FRACTION):
    '''
    Clean ground-truth metrics over the ``frac`` most uncertain pixels
    (ranked by the first-step log-variance) of every frame.

    :rtype: :class:`~udepth.metrics.MetricReport`
    '''
    reports = []
    for frame in frames:
        prediction = pipeline.predict(frame.guide, frame.sparse)
        target = frame.target('clean')
        selector = top_fraction_selector(prediction.s1, frac, target.valid)
        reports.append(evaluate_subset(prediction.final, target, selector))
    return MetricReport.mean_of(reports)


class Experiment(UdepthObject):
    '''
    Base class of the experiments, subclasses implement :func:`run`.
    '''

    name = None

    def __init__(self, settings, logger=None):
        super(Experiment, self).__init__(self.name, logger)
        kassert.is_of_types(settings, ExperimentSettings)
        self.settings = settings

    def run(self):
        '''
        :rtype: :class:`~udepth.experiments.result.ExperimentResult`
        '''
        self.not_implemented('run')

    def train_stage1(self, seed, *extra):
        train_cfg, model_cfg = self.settings.configs('one', seed, *extra)
        model = JointModel.init(seed, model_cfg)
        trainer = Stage1Trainer(train_cfg, self.settings.train_frames, model, self.settings.eval_frames, self.logger)
        return trainer.train()

    def train_stage2(self, seed, stage1_model, *extra):
        train_cfg, model_cfg = self.settings.configs('two', seed, *extra)
        model_cfg = model_cfg.replace(guide_channels=stage1_model.config.guide_channels)
        model = ResidualNet.init(seed, model_cfg)
        trainer = Stage2Trainer(train_cfg, self.settings.train_frames, stage1_model, model, self.settings.eval_frames, self.logger)
        return trainer.train()


class LossAblation(Experiment):
    '''
    First-step training with the MSE loss, the uncertainty loss, and the
    uncertainty loss without the Jeffrey's prior, on every seed.
    '''

    name = 'loss_ablation'
    variants = (('mse', ('loss=mse',)), ('ud', ('loss=ud', 'jeffrey=1')), ('ud_nojeffrey', ('loss=ud', 'jeffrey=0')))

    def run(self):
        result = ExperimentResult(self.name)
        for seed in self.settings.seeds:
            finals = {}
            for variant, extra in self.variants:
                self.logger.info('%s: %s, seed %d' % (self.name, variant, seed))
                _, log = self.train_stage1(seed, *extra)
                metrics = _final_metrics(log)
                finals[variant] = log.curve('mae_clean_mm')
                result.add_run(variant, seed, metrics, log)
            target = finals['mse'][-1]
            result.set_summary('seed%d_mse_epochs_to_final' % seed, epochs_to_reach(finals['mse'], target))
            result.set_summary('seed%d_ud_epochs_to_mse_final' % seed, epochs_to_reach(finals['ud'], target))
        mse = result.median('mse', 'mae_clean_mm')
        ud = result.median('ud', 'mae_clean_mm')
        result.set_summary('median_mae_mse_mm', mse)
        result.set_summary('median_mae_ud_mm', ud)
        result.set_summary('median_mae_ud_nojeffrey_mm', result.median('ud_nojeffrey', 'mae_clean_mm'))
        result.set_summary('ud_mae_gain', 1.0 - ud / mse)
        return result


class ResidualAblation(Experiment):
    '''
    First step alone, then refined with L_UR and with L_URB.
    Metrics include the clean MAE over the most uncertain pixels.
    '''

    name = 'residual_ablation'

    def run(self):
        result = ExperimentResult(self.name)
        frames = self.settings.eval_frames
        for seed in self.settings.seeds:
            self.logger.info('%s: first step, seed %d' % (self.name, seed))
            stage1_model, log = self.train_stage1(seed, 'loss=ud')
            stage1 = Pipeline(stage1_model)
            metrics = _final_metrics(log)
            metrics['top_mae_clean_mm'] = top_uncertainty_report(stage1, frames).mae_mm
            result.add_run('stage1', seed, metrics, log)
            for loss in ('ur', 'urb'):
                self.logger.info('%s: refinement with %s, seed %d' % (self.name, loss, seed))
                residual_model, log = self.train_stage2(seed, stage1_model, 'loss=%s' % loss)
                metrics = _final_metrics(log)
                metrics['top_mae_clean_mm'] = top_uncertainty_report(Pipeline(stage1_model, residual_model), frames).mae_mm
                result.add_run(loss, seed, metrics, log)
        for variant in ('stage1', 'ur', 'urb'):
            result.set_summary('median_mae_%s_mm' % variant, result.median(variant, 'mae_clean_mm'))
            result.set_summary('median_rmse_%s_mm' % variant, result.median(variant, 'rmse_clean_mm'))
            result.set_summary('median_top_mae_%s_mm' % variant, result.median(variant, 'top_mae_clean_mm'))
        return result


def block_gradient_norms(model, frame, train_config):
    '''
    Gradient norm of the multiscale loss with respect to the parameters of
    every completion block, on one frame.

    :return: list of norms indexed by scale k (finest first)
    '''
    trainer = Stage1Trainer(train_config, [frame], model, [frame])
    _, grads = trainer.frame_gradients(frame, 0)
    norms = []
    for level in range(model.config.ns):
        prefix = 'block%d.' % level
        squares = [np.sum(g * g) for name, g in grads.items() if name.startswith(prefix)]
        norms.append(float(np.sqrt(np.sum(squares))))
    return norms


class NsSweep(Experiment):
    '''
    First-step training with 1 to 4 completion blocks. Every block is
    checked to receive a gradient at initialisation.
    '''

    name = 'ns_sweep'

    def __init__(self, settings, ns_values=(1, 2, 3, 4), logger=None):
        super(NsSweep, self).__init__(settings, logger)
        self.ns_values = tuple(ns_values)

    def run(self):
        result = ExperimentResult(self.name)
        first_frame = self.settings.train_frames[0]
        for seed in self.settings.seeds:
            for ns in self.ns_values:
                self.logger.info('%s: ns=%d, seed %d' % (self.name, ns, seed))
                train_cfg, model_cfg = self.settings.configs('one', seed, 'ns=%d' % ns)
                norms = block_gradient_norms(JointModel.init(seed, model_cfg), first_frame, train_cfg)
                _, log = self.train_stage1(seed, 'ns=%d' % ns)
                metrics = _final_metrics(log)
                metrics['min_block_grad_norm'] = min(norms)
                result.add_run('ns%d' % ns, seed, metrics, log)
        for ns in self.ns_values:
            result.set_summary('median_mae_ns%d_mm' % ns, result.median('ns%d' % ns, 'mae_clean_mm'))
        return result


class ResidualInputAblation(Experiment):
    '''
    Refinement networks fed with different input subsets on a shared first step.
    '''

    name = 'residual_input_ablation'

    def __init__(self, settings, input_sets=RESIDUAL_INPUT_SETS, logger=None):
        super(ResidualInputAblation, self).__init__(settings, logger)
        self.input_sets = tuple(tuple(s) for s in input_sets)

    def run(self):
        result = ExperimentResult(self.name)
        for seed in self.settings.seeds:
            stage1_model, _ = self.train_stage1(seed, 'loss=ud')
            for inputs in self.input_sets:
                variant = '+'.join(inputs)
                self.logger.info('%s: %s, seed %d' % (self.name, variant, seed))
                _, log = self.train_stage2(seed, stage1_model, 'residual_inputs=%s' % ','.join(inputs))
                result.add_run(variant, seed, _final_metrics(log), log)
        for inputs in self.input_sets:
            variant = '+'.join(inputs)
            result.set_summary('median_mae_%s_mm' % variant, result.median(variant, 'mae_clean_mm'))
        return result


EXPERIMENTS = {
    LossAblation.name: LossAblation,
    ResidualAblation.name: ResidualAblation,
    NsSweep.name: NsSweep,
    ResidualInputAblation.name: ResidualInputAblation,
}


def loss_ablation(settings):
    return LossAblation(settings).run()


def residual_ablation(settings):
    return ResidualAblation(settings).run()


def ns_sweep(settings, ns_values=(1, 2, 3, 4)):
    return NsSweep(settings, ns_values).run()


def residual_input_ablation(settings, input_sets=RESIDUAL_INPUT_SETS):
    return ResidualInputAblation(settings, input_sets).run()
