# STLA -- small-time local attainability toolkit
# Copyright (C) 2014 STLA contributors.  See AUTHORS.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.
#
# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""
Compile expression trees into plain Python functions.

The integrator evaluates the same handful of expressions hundreds of
thousands of times, so they are turned into one generated function
per expression list.  The generated code calls the helpers of
stla.exprcore.jets, which keeps its values identical to eval_value.
"""

import logging

from stla.exprcore import jets
from stla.exprcore.nodes import Call, Neg, Num, Var


_log = logging.getLogger(__name__)


_NAMESPACE = {
    '_div': jets.div,
    '_ipow': jets.ipow,
    '_rpow': jets.rpow,
    '_sin': jets.VALUE_FUNCTIONS['sin'],
    '_cos': jets.VALUE_FUNCTIONS['cos'],
    '_exp': jets.VALUE_FUNCTIONS['exp'],
    '_sqrt': jets.VALUE_FUNCTIONS['sqrt'],
    '_log': jets.VALUE_FUNCTIONS['log'],
}


def _source(node):
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, Var):
        return 'x%d' % node.index
    if isinstance(node, Neg):
        return '(-%s)' % _source(node.operand)
    if isinstance(node, Call):
        return '_%s(%s)' % (node.func, _source(node.arg))
    left = _source(node.left)
    if node.op == '^':
        p = node.right.value
        k = jets.integer_exponent(p)
        if k is None:
            return '_rpow(%s, %r)' % (left, p)
        if k >= 0:
            return '_ipow(%s, %d)' % (left, k)
        return '_div(1.0, _ipow(%s, %d))' % (left, -k)
    right = _source(node.right)
    if node.op == '/':
        return '_div(%s, %s)' % (left, right)
    return '(%s %s %s)' % (left, node.op, right)


class CompiledVector(object):
    """
    A list of expressions over n variables evaluated together.

    Calling it with a point returns a tuple of floats.  On a domain
    problem the tree walker re-evaluates the expressions so that the
    raised DomainError names the failing subexpression.
    """

    def __init__(self, asts, n):
        self.asts = tuple(asts)
        self.n = n
        unpack = ', '.join('x%d' % i for i in range(n))
        body = ''.join('%s, ' % _source(ast) for ast in self.asts)
        source = (
            'def _compiled(point):\n'
            '    %s, = [float(v) for v in point]\n'
            '    return (%s)\n') % (unpack, body)
        namespace = dict(_NAMESPACE)
        exec(compile(source, '<stla-expr>', 'exec'), namespace)
        self._func = namespace['_compiled']

    def __call__(self, point):
        try:
            return self._func(point)
        except (jets.DomainError, ArithmeticError):
            for ast in self.asts:
                jets.eval_value(ast, point)
            raise

    def __getstate__(self):
        return {'asts': self.asts, 'n': self.n}

    def __setstate__(self, state):
        self.__init__(state['asts'], state['n'])


def compile_vector(asts, n):
    """Compile asts (expressions over n variables) into a callable."""
    return CompiledVector(asts, n)
