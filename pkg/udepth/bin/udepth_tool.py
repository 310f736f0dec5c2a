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
Tools for generating synthetic depth completion data, training,
evaluating and rendering udepth models.

Usage:
    udepth-tool gen [options] --out DIR --frames N --seed S
    udepth-tool train [options] [--set KEYVAL]... --stage STAGE --data DIR --config FILE --ckpt-out FILE
    udepth-tool eval [options] --ckpt FILE --data DIR
    udepth-tool render [options] --ckpt FILE --frame DIR --out DIR
    udepth-tool ablate [options] [--set KEYVAL]... <EXPERIMENT> --data DIR --out DIR
    udepth-tool --version

Commands:
    gen         generate a synthetic dataset (guide, sparse LiDAR, semi-dense and clean ground truth)
    train       train the first step (--stage 1) or the refinement step (--stage 2)
    eval        print the metrics of a checkpoint (and optional refinement checkpoint) on a dataset
    render      write false-color PPM renderings of the predictions of one frame
    ablate      run an ablation experiment: loss_ablation, residual_ablation, ns_sweep, residual_input_ablation

Options:
    --out -o DIR            output directory
    --frames N              number of frames to generate
    --seed S                global seed of the generated dataset
    --outlier-rate R        outlier rate of the semi-dense ground truth [default: 0.1]
    --dropout D             probability of losing a LiDAR return [default: 0.1]
    --size HxW              frame size [default: 64x192]
    --workers N             worker threads [default: 1]
    --stage STAGE           training step, 1 or 2
    --data DIR              dataset directory
    --config FILE           training configuration file (key=value lines)
    --set KEYVAL            override a configuration value (key=value), repeatable
    --ckpt-out FILE         checkpoint written by training
    --ckpt-in FILE          first-step checkpoint, required by --stage 2
    --log-out FILE          training log CSV (default: <ckpt-out>.csv)
    --ckpt FILE             first-step checkpoint
    --ckpt2 FILE            refinement checkpoint
    --against GT            ground truth to evaluate against, clean or semi [default: clean]
    --frame DIR             frame directory of a dataset
    --seeds LIST            comma-separated seeds of the ablation runs [default: 0,1,2]
    --epochs N              first-step epochs of the ablation runs [default: 30]
    --stage2-epochs N       refinement epochs of the ablation runs [default: 20]
    --eval-frames N         frames held out for evaluation by the ablation runs [default: 0]
    --log-dir DIR           directory of the run log file (default: ./udepthlogs)
    --verbose -v            verbose output
    --version               print version and exit
    --help -h               print this help and exit

Exit codes:
    0 success, 1 runtime or I/O error, 2 usage error
'''
import os
import sys
import traceback
import docopt
from udepth import __version__
from udepth.core import UdepthException, UdepthObject
from udepth.grid import pnm
from udepth.grid.colormap import colorize_depth, colorize_logvar, colorize_residual
from udepth.lidarsim import ScenePreset, ScanConfig, CorruptionConfig, Dataset, Frame, gen_dataset
from udepth.model import JointModel, ResidualNet, Pipeline, save_model, load_model
from udepth.trainer import load_configs, train_stage1, train_stage2, eval_run
from udepth.experiments import ExperimentSettings, EXPERIMENTS


class UsageError(UdepthException):
    '''
    Raised on flag values docopt cannot validate, reported with exit code 2.
    '''
    pass


def to_int(val, name, minimum=None):
    try:
        value = int(val)
    except (TypeError, ValueError):
        raise UsageError('%s should be a number, got %r' % (name, val))
    if minimum is not None and value < minimum:
        raise UsageError('%s should be >= %d, got %d' % (name, minimum, value))
    return value


def to_float(val, name):
    try:
        return float(val)
    except (TypeError, ValueError):
        raise UsageError('%s should be a number, got %r' % (name, val))


def to_size(val):
    parts = val.lower().split('x')
    if len(parts) != 2:
        raise UsageError('--size should be HxW, got %r' % val)
    return to_int(parts[0], '--size height', 1), to_int(parts[1], '--size width', 1)


class Handler(object):

    command = None

    def __init__(self, opts, logger):
        self.opts = opts
        self.logger = logger

    def run_tag(self):
        '''
        :return: name of the run, used for its log file
        '''
        return self.command

    def run(self):
        '''
        :return: exit code
        '''
        raise NotImplementedError('run is not overridden by %s' % type(self).__name__)


class GenHandler(Handler):

    command = 'gen'

    def __init__(self, opts, logger):
        super(GenHandler, self).__init__(opts, logger)
        self.out_dir = opts['--out']
        self.frames = to_int(opts['--frames'], '--frames', 1)
        self.seed = to_int(opts['--seed'], '--seed', 0)
        self.workers = to_int(opts['--workers'], '--workers', 1)
        height, width = to_size(opts['--size'])
        try:
            self.preset = ScenePreset(
                height, width,
                scan=ScanConfig(dropout=to_float(opts['--dropout'], '--dropout')),
                corruption=CorruptionConfig(outlier_rate=to_float(opts['--outlier-rate'], '--outlier-rate')))
        except UdepthException as ex:
            raise UsageError(str(ex))

    def run_tag(self):
        return 'gen_seed%d' % self.seed

    def run(self):
        manifest = gen_dataset(self.frames, self.seed, self.out_dir, self.preset, self.workers)
        sys.stdout.write('%s\n' % manifest.path)
        return 0


class TrainHandler(Handler):

    command = 'train'

    def __init__(self, opts, logger):
        super(TrainHandler, self).__init__(opts, logger)
        stages = {'1': 'one', '2': 'two'}
        if opts['--stage'] not in stages:
            raise UsageError('--stage should be 1 or 2, got %r' % opts['--stage'])
        self.stage = stages[opts['--stage']]
        self.ckpt_in = opts['--ckpt-in']
        if self.stage == 'two' and not self.ckpt_in:
            raise UsageError('--stage 2 needs --ckpt-in')
        self.ckpt_out = opts['--ckpt-out']
        self.log_out = opts['--log-out'] or self.ckpt_out + '.csv'
        self.overrides = list(opts['--set'] or []) + ['stage=%s' % self.stage]

    def run_tag(self):
        return 'train_stage%s' % self.opts['--stage']

    def run(self):
        train_cfg, model_cfg = load_configs(self.opts['--config'], self.overrides)
        dataset = Dataset.load(self.opts['--data'])
        if self.stage == 'one':
            model, log = train_stage1(train_cfg, dataset, JointModel.init(train_cfg.seed, model_cfg))
        else:
            stage1_model = load_model(self.ckpt_in, 'joint')
            model_cfg = model_cfg.replace(guide_channels=stage1_model.config.guide_channels)
            model, log = train_stage2(train_cfg, dataset, stage1_model, ResidualNet.init(train_cfg.seed, model_cfg))
        save_model(self.ckpt_out, model)
        log.write_csv(self.log_out)
        self.logger.info('checkpoint written to %s, log written to %s' % (self.ckpt_out, self.log_out))
        return 0


class EvalHandler(Handler):

    command = 'eval'

    def __init__(self, opts, logger):
        super(EvalHandler, self).__init__(opts, logger)
        if opts['--against'] not in ('clean', 'semi'):
            raise UsageError('--against should be clean or semi, got %r' % opts['--against'])
        self.workers = to_int(opts['--workers'], '--workers', 1)

    def run(self):
        pipeline = Pipeline.load(self.opts['--ckpt'], self.opts['--ckpt2'])
        report = eval_run(pipeline, Dataset.load(self.opts['--data']), self.opts['--against'], self.workers)
        sys.stdout.write('%s\n' % report.to_line())
        return 0


class RenderHandler(Handler):

    command = 'render'

    def run(self):
        pipeline = Pipeline.load(self.opts['--ckpt'], self.opts['--ckpt2'])
        frame = Frame.read(self.opts['--frame'])
        prediction = pipeline.predict(frame.guide, frame.sparse)
        out_dir = self.opts['--out']
        if not os.path.isdir(out_dir):
            os.makedirs(out_dir)
        outputs = [('depth.ppm', colorize_depth(prediction.stage1.depth)),
                   ('uncert.ppm', colorize_logvar(prediction.s1.s))]
        if prediction.residual is not None:
            outputs.append(('residual.ppm', colorize_residual(prediction.residual.residual)))
            outputs.append(('final.ppm', colorize_depth(prediction.final.depth)))
        for name, rgb in outputs:
            pnm.write_rgb(os.path.join(out_dir, name), rgb)
            self.logger.info('wrote %s' % os.path.join(out_dir, name))
        return 0


class AblateHandler(Handler):

    command = 'ablate'

    def __init__(self, opts, logger):
        super(AblateHandler, self).__init__(opts, logger)
        self.experiment = opts['<EXPERIMENT>']
        if self.experiment not in EXPERIMENTS:
            raise UsageError('unknown experiment %r, expected one of %s' % (self.experiment, ', '.join(sorted(EXPERIMENTS))))
        self.seeds = [to_int(s, '--seeds', 0) for s in opts['--seeds'].split(',') if s.strip()]
        self.epochs = to_int(opts['--epochs'], '--epochs', 1)
        self.stage2_epochs = to_int(opts['--stage2-epochs'], '--stage2-epochs', 1)
        self.eval_frames = to_int(opts['--eval-frames'], '--eval-frames', 0)
        self.workers = to_int(opts['--workers'], '--workers', 1)

    def run_tag(self):
        return 'ablate_%s' % self.experiment

    def run(self):
        settings = ExperimentSettings(
            Dataset.load(self.opts['--data']), self.seeds, self.epochs, self.stage2_epochs,
            self.eval_frames, list(self.opts['--set'] or []), self.workers)
        result = EXPERIMENTS[self.experiment](settings).run()
        sys.stdout.write('%s\n' % result.write(self.opts['--out']))
        return 0


HANDLERS = [
    ('gen', GenHandler),
    ('train', TrainHandler),
    ('eval', EvalHandler),
    ('render', RenderHandler),
    ('ablate', AblateHandler),
]


def main(argv=None):
    '''
    :param argv: command line arguments (default: sys.argv[1:])
    :return: exit code
    '''
    try:
        opts = docopt.docopt(__doc__, argv=argv, version=__version__)
    except docopt.DocoptExit as ex:
        sys.stderr.write('%s\n' % ex)
        return 2
    except SystemExit as ex:
        # --help and --version
        return 0 if not ex.code else 1
    logger = UdepthObject.get_logger()
    UdepthObject.set_verbosity(opts['--verbose'])
    try:
        for command, handler_class in HANDLERS:
            if opts[command]:
                handler = handler_class(opts, logger)
                if not os.environ.get('UDEPTH_NO_LOGFILE'):
                    UdepthObject.log_to_file(handler.run_tag(), opts['--log-dir'])
                return handler.run()
    except UsageError as ex:
        sys.stderr.write('Error: %s\n%s\n' % (ex, docopt.printable_usage(__doc__)))
        return 2
    except Exception as ex:
        if opts['--verbose']:
            logger.error(traceback.format_exc())
        logger.error('Error: %s' % ex)
        return 1
    finally:
        UdepthObject.close_log_file()
    return 2


def _main():
    sys.exit(main())


if __name__ == '__main__':
    _main()
