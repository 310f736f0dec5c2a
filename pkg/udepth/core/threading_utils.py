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
Threading Utils
'''
import threading


class FuncThread(threading.Thread):
    '''
    FuncThread is a thread wrapper to create thread from a function.
    The return value (or the raised exception) of the function is kept,
    and re-raised on the caller thread by :func:`get_result`.
    '''

    def __init__(self, func, *args):
        '''
        :param func: function to be called in this thread
        :param args: arguments for the function
        '''
        super(FuncThread, self).__init__()
        self._func = func
        self._args = args
        self._result = None
        self._exception = None

    def run(self):
        '''
        run the the function in this thread's context
        '''
        try:
            self._result = self._func(*self._args)
        #
        # We are going to re-throw this exception from get_result
        #
        except Exception as ex:  # pylint: disable=W0703
            self._exception = ex

    def get_result(self):
        '''
        wait for the thread and return the function's result

        :return: result of the function
        '''
        self.join()
        if self._exception is not None:
            raise self._exception  # pylint: disable=E0702
        return self._result


def run_parallel(jobs, workers=1):
    '''
    Run independent jobs, at most ``workers`` at a time.
    Results are returned in submission order, whatever the scheduling was.

    :param jobs: list of (func, args) tuples
    :param workers: maximal number of concurrent threads (default: 1)
    :return: list of results
    '''
    if workers <= 1:
        return [func(*args) for func, args in jobs]
    results = []
    for start in range(0, len(jobs), workers):
        threads = [FuncThread(func, *args) for func, args in jobs[start:start + workers]]
        for thread in threads:
            thread.start()
        results.extend(thread.get_result() for thread in threads)
    return results
