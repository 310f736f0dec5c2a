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
UdepthObject is subclassed by the long-running parts of udepth (dataset
generation, trainers, experiments) and gives them the shared logger.

The console handler is always attached. A run of the command line tool
additionally logs to its own file, named after the run
(``udepth_<tag>_<timestamp>.log``), see :func:`UdepthObject.log_to_file`.
'''
import logging
import os
import time


class UdepthObject(object):
    '''
    Named object logging through the shared udepth logger.
    '''

    _logger = None
    _file_handler = None
    log_dir = os.environ.get('UDEPTH_LOG_DIR', './udepthlogs')

    @classmethod
    def get_logger(cls):
        '''
        :return: the shared udepth logger
        '''
        if UdepthObject._logger is None:
            logger = logging.getLogger('udepth')
            logger.setLevel(logging.INFO)
            consolehandler = logging.StreamHandler()
            consolehandler.setFormatter(logging.Formatter('[%(levelname)-8s][%(module)s.%(funcName)s] %(message)s'))
            logger.addHandler(consolehandler)
            UdepthObject._logger = logger
        return UdepthObject._logger

    @classmethod
    def log_to_file(cls, tag, log_dir=None):
        '''
        Send the log of a run to a file of its own, replacing the file of
        the previous run.

        :param tag: run name, e.g. 'gen_seed3' or 'train_stage1'
        :param log_dir: directory of the file (default: :attr:`log_dir`)
        :return: path of the log file
        '''
        log_dir = log_dir or UdepthObject.log_dir
        if not os.path.isdir(log_dir):
            os.makedirs(log_dir)
        path = os.path.join(log_dir, 'udepth_%s_%s.log' % (tag, time.strftime('%Y%m%d-%H%M%S')))
        UdepthObject.close_log_file()
        handler = logging.FileHandler(path)
        handler.setFormatter(logging.Formatter('[%(asctime)s] [%(levelname)s] [%(module)s.%(funcName)s] -> %(message)s'))
        UdepthObject.get_logger().addHandler(handler)
        UdepthObject._file_handler = handler
        return path

    @classmethod
    def close_log_file(cls):
        '''
        Detach the file of the current run, if any.
        '''
        handler = UdepthObject._file_handler
        if handler is not None:
            UdepthObject.get_logger().removeHandler(handler)
            handler.close()
            UdepthObject._file_handler = None

    @classmethod
    def get_log_file_name(cls):
        '''
        :return: path of the current run's log file, None when logging to the console only
        '''
        handler = UdepthObject._file_handler
        return handler.baseFilename if handler is not None else None

    @classmethod
    def set_verbosity(cls, verbose):
        '''
        :param verbose: log DEBUG messages when true, INFO and up otherwise
        '''
        UdepthObject.get_logger().setLevel(logging.DEBUG if verbose else logging.INFO)

    def __init__(self, name, logger=None):
        '''
        :param name: name of the object
        :param logger: logger to use (default: the shared udepth logger)
        '''
        self.name = name
        self.logger = logger if logger else UdepthObject.get_logger()

    def not_implemented(self, func_name):
        '''
        :raise NotImplementedError: always, after logging it
        '''
        msg = '%s is not overridden by %s' % (func_name, type(self).__name__)
        self.logger.error(msg)
        raise NotImplementedError(msg)
