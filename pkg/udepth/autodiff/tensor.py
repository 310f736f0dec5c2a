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
Tensors and the recording tape of the reverse-mode engine.

A :class:`Tape` records every operation applied to its tensors, in creation
order, which is a topological order of the computation graph.
:func:`Tape.backward` walks the records once in reverse order and returns the
gradients of a scalar root with respect to every leaf of the tape.
A tape is single use: recording again is required for a second backward.
Tensors without a tape are constants.
'''
from collections import OrderedDict
import numpy as np
from udepth.core import DomainError, InvalidArgument, TapeError


class Tensor(object):
    '''
    Dense N-d float64 array, optionally recorded on a :class:`Tape`.
    4-d tensors use the (N, C, H, W) layout.
    '''

    def __init__(self, data, tape=None, parents=(), backward=None, op='const', name=None):
        '''
        :param data: array-like values
        :param tape: recording tape (default: None, a constant)
        :param parents: input tensors of the producing operation
        :param backward: function(grad_out) -> tuple of grads, one per parent
        :param op: name of the producing operation
        :param name: name of the tensor (leaves are keyed by name)
        '''
        self.data = np.asarray(data, dtype=np.float64)
        if not np.all(np.isfinite(self.data)):
            raise DomainError('%s produced non-finite values' % op)
        self.tape = tape
        self.parents = tuple(parents)
        self.op = op
        self.name = name
        self.grad = None
        self._backward = backward
        if tape is not None:
            tape.record(self)

    @classmethod
    def constant(cls, data):
        '''
        :return: a tensor that is not recorded on any tape
        '''
        return cls(data)

    @property
    def shape(self):
        return self.data.shape

    @property
    def size(self):
        return self.data.size

    @property
    def is_leaf(self):
        return self.tape is not None and self._backward is None

    def item(self):
        '''
        :return: the value of a single-element tensor as a float
        '''
        if self.data.size != 1:
            raise InvalidArgument('item() of a tensor with shape %s' % (self.shape,))
        return float(self.data.reshape(()))

    def __repr__(self):
        return 'Tensor(%s, op=%s%s)' % (self.shape, self.op, ', name=%s' % self.name if self.name else '')


class GradientMap(OrderedDict):
    '''
    Gradients of the leaves of a tape, keyed by leaf name, in leaf creation order.
    '''

    def of(self, tensor):
        '''
        :param tensor: a leaf tensor
        :return: its gradient
        '''
        return self[tensor.name]


class Tape(object):
    '''
    Ordered record of operations, confined to one thread.
    '''

    def __init__(self):
        self._nodes = []
        self._index = {}
        self._names = set()
        self._consumed = False

    def __len__(self):
        return len(self._nodes)

    def record(self, tensor):
        '''
        Append a tensor (leaf or operation output) to the tape.
        Parents always precede their children.
        '''
        if self._consumed:
            raise TapeError('cannot record on a tape after backward')
        for parent in tensor.parents:
            if parent.tape is self and id(parent) not in self._index:
                raise TapeError('parent of %r is not on the tape' % (tensor,))
        self._index[id(tensor)] = len(self._nodes)
        self._nodes.append(tensor)

    def leaf(self, data, name=None):
        '''
        Create a differentiable leaf tensor.

        :param data: array-like values
        :param name: unique leaf name (default: leaf<index>)
        '''
        if name is None:
            name = 'leaf%d' % len(self._nodes)
        if name in self._names:
            raise InvalidArgument('duplicate leaf name %s' % name)
        self._names.add(name)
        return Tensor(np.array(data, dtype=np.float64, copy=True), tape=self, op='leaf', name=name)

    def leaves(self):
        return [node for node in self._nodes if node.is_leaf]

    def backward(self, root):
        '''
        Back-propagate from a scalar root.

        :param root: scalar tensor recorded on this tape
        :rtype: :class:`GradientMap`
        :return: gradient of the root with respect to every leaf (zeros for unreached leaves)
        '''
        if self._consumed:
            raise TapeError('backward was already called on this tape')
        if root.tape is not self:
            raise TapeError('root is not recorded on this tape')
        if root.size != 1:
            raise InvalidArgument('backward root must be a scalar, got shape %s' % (root.shape,))
        self._consumed = True
        grads = {self._index[id(root)]: np.ones_like(root.data)}
        for idx in range(self._index[id(root)], -1, -1):
            grad = grads.pop(idx, None)
            node = self._nodes[idx]
            if node.is_leaf:
                node.grad = grad if grad is not None else np.zeros_like(node.data)
                continue
            if grad is None:
                continue
            parent_grads = node._backward(grad)
            for parent, pgrad in zip(node.parents, parent_grads):
                if pgrad is None or parent.tape is not self:
                    continue
                pidx = self._index[id(parent)]
                if pidx in grads:
                    grads[pidx] = grads[pidx] + pgrad
                else:
                    grads[pidx] = pgrad
        result = GradientMap()
        for node in self._nodes:
            if node.is_leaf:
                if node.grad is None:
                    node.grad = np.zeros_like(node.data)
                result[node.name] = node.grad
        return result
