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
Line-based ``key=value`` configuration objects.

Values are typed by the default of their key: int, float, bool, str, or
tuples written as comma-separated lists. Blank lines and lines starting
with ``#`` are ignored. Unknown keys are rejected.
'''
from collections import OrderedDict
from udepth.core import InvalidArgument

_TRUE = ('1', 'true', 'yes', 'on')
_FALSE = ('0', 'false', 'no', 'off')


def parse_value(text, default):
    '''
    :param text: textual value
    :param default: default value of the key, giving the type
    :return: the typed value
    '''
    text = text.strip()
    try:
        if isinstance(default, bool):
            lowered = text.lower()
            if lowered in _TRUE:
                return True
            if lowered in _FALSE:
                return False
            raise ValueError(text)
        if isinstance(default, int):
            return int(text)
        if isinstance(default, float):
            return float(text)
        if isinstance(default, tuple):
            items = [t.strip() for t in text.split(',') if t.strip()]
            item_type = type(default[0]) if default else str
            return tuple(item_type(t) for t in items)
    except ValueError:
        raise InvalidArgument('bad value %r (expected %s)' % (text, type(default).__name__))
    return text


def format_value(value):
    if isinstance(value, bool):
        return '1' if value else '0'
    if isinstance(value, tuple):
        return ','.join(format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


class KeyValueConfig(object):
    '''
    Base class of configurations. Subclasses declare ``defaults``, an
    OrderedDict of key -> default value, and may override :func:`validate`.
    '''

    defaults = OrderedDict()

    def __init__(self, **values):
        '''
        :param values: overrides of the defaults
        '''
        self._values = OrderedDict(self.defaults)
        for key, value in values.items():
            self._check_key(key)
            if isinstance(self.defaults[key], tuple):
                value = tuple(value)
            self._values[key] = value
        self.validate()

    def _check_key(self, key):
        if key not in self.defaults:
            raise InvalidArgument('unknown %s key %r' % (type(self).__name__, key))

    def __getattr__(self, key):
        values = self.__dict__.get('_values')
        if values is not None and key in values:
            return values[key]
        raise AttributeError(key)

    def validate(self):
        '''
        Check the values, raise :class:`~udepth.core.InvalidArgument` on error.
        '''
        pass

    def replace(self, **values):
        '''
        :return: a copy with some values replaced
        '''
        merged = OrderedDict(self._values)
        merged.update(values)
        return type(self)(**merged)

    def with_overrides(self, assignments):
        '''
        :param assignments: list of 'key=value' strings
        :return: a copy with the assignments applied
        '''
        values = OrderedDict()
        for assignment in assignments:
            if '=' not in assignment:
                raise InvalidArgument('expected key=value, got %r' % assignment)
            key, text = assignment.split('=', 1)
            key = key.strip()
            self._check_key(key)
            values[key] = parse_value(text, self.defaults[key])
        return self.replace(**values)

    @classmethod
    def from_lines(cls, lines):
        '''
        :param lines: iterable of 'key=value' lines
        '''
        assignments = []
        for line in lines:
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            assignments.append(line)
        return cls().with_overrides(assignments)

    @classmethod
    def from_file(cls, path, overrides=()):
        '''
        :param path: configuration file
        :param overrides: list of 'key=value' strings applied after the file
        :raise IOError: if the file cannot be read
        '''
        with open(path, 'r') as f:
            config = cls.from_lines(f)
        return config.with_overrides(overrides)

    def to_items(self):
        '''
        :return: list of (key, formatted value)
        '''
        return [(k, format_value(v)) for k, v in self._values.items()]

    def to_text(self):
        return ''.join('%s=%s\n' % item for item in self.to_items())

    def __eq__(self, other):
        return type(self) is type(other) and self._values == other._values

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return '%s(%s)' % (type(self).__name__, ', '.join('%s=%s' % item for item in self.to_items()))
