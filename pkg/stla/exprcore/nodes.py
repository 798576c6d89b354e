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
Expression tree nodes.

Trees are immutable once built; two trees compare equal when they are
structurally identical.
"""

from dataclasses import dataclass
from typing import Union


FUNCTIONS = ('sin', 'cos', 'exp', 'sqrt', 'log')
CONSTANTS = {'pi': 3.141592653589793}


@dataclass(frozen=True)
class Num(object):
    value: float


@dataclass(frozen=True)
class Var(object):
    index: int
    name: str


@dataclass(frozen=True)
class Neg(object):
    operand: 'Node'


@dataclass(frozen=True)
class BinOp(object):
    # one of + - * / ^ ; for ^ the right side is always a Num
    op: str
    left: 'Node'
    right: 'Node'


@dataclass(frozen=True)
class Call(object):
    func: str
    arg: 'Node'


Node = Union[Num, Var, Neg, BinOp, Call]


def format_expr(node):
    """
    Print a tree fully parenthesised.

    Parsing the result (with the same variable list) gives back a tree
    equal to node.
    """
    if isinstance(node, Num):
        text = repr(float(node.value))
        if node.value < 0:
            return u'(%s)' % text
        return text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return u'(-%s)' % format_expr(node.operand)
    if isinstance(node, BinOp):
        return u'(%s %s %s)' % (
            format_expr(node.left), node.op, format_expr(node.right))
    if isinstance(node, Call):
        return u'%s(%s)' % (node.func, format_expr(node.arg))
    raise TypeError("Not an expression node: %r" % (node,))


def variables_used(node):
    """Set of variable indices appearing in node."""
    if isinstance(node, Var):
        return {node.index}
    if isinstance(node, Num):
        return set()
    if isinstance(node, Neg):
        return variables_used(node.operand)
    if isinstance(node, Call):
        return variables_used(node.arg)
    return variables_used(node.left) | variables_used(node.right)
