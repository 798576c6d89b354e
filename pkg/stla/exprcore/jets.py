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
Second order jets: value, gradient and Hessian carried together
through the arithmetic of an expression tree.

The value part of every operation is computed with exactly the same
floating point operations as the value-only evaluators, so
eval_value(ast, x) == eval_jet2(ast, x).value bit for bit.
"""

import logging
import math

import numpy as np

from stla.errors import EvaluationError
from stla.exprcore.nodes import Call, Neg, Num, Var, format_expr


_log = logging.getLogger(__name__)


class DomainError(EvaluationError):
    """
    An expression was evaluated outside its domain: sqrt or log of a
    negative number, a division by zero, an overflow.

    The offending subexpression is attached once known.
    """
    general_message = u'Expression evaluated outside its domain.'

    def __init__(self, reason, subexpression=None):
        self.reason = reason
        self.subexpression = subexpression
        EvaluationError.__init__(
            self, self._describe(), reason=reason,
            subexpression=subexpression)

    def _describe(self):
        if self.subexpression is None:
            return self.reason
        return u'%s in %s' % (self.reason, self.subexpression)

    def attach(self, node):
        if self.subexpression is None:
            self.subexpression = format_expr(node)
            self.metadata['subexpression'] = self.subexpression
            self.message = self._describe()
            self.args = (self.message,)
        return self


## Scalar helpers shared by every evaluator

def div(a, b):
    if b == 0:
        raise DomainError(u'division by zero')
    return a / b


def ipow(base, k, one=1.0):
    """
    base**k for a non-negative integer k by binary exponentiation.

    Works for floats and for Jet2 (pass a Jet2 one).
    """
    result = None
    while k:
        if k & 1:
            result = base if result is None else result * base
        k >>= 1
        if k:
            base = base * base
    return one if result is None else result


def rpow(base, p):
    if base <= 0:
        raise DomainError(u'non-integer power of a non-positive number')
    return base ** p


def fsqrt(v):
    if v < 0:
        raise DomainError(u'sqrt of a negative number')
    return math.sqrt(v)


def flog(v):
    if v <= 0:
        raise DomainError(u'log of a non-positive number')
    return math.log(v)


def fexp(v):
    try:
        return math.exp(v)
    except OverflowError:
        raise DomainError(u'exp overflow')


VALUE_FUNCTIONS = {
    'sin': math.sin,
    'cos': math.cos,
    'exp': fexp,
    'sqrt': fsqrt,
    'log': flog,
}


def integer_exponent(p):
    """The exponent as an int if it is integral, else None."""
    if p == math.floor(p) and abs(p) < 2 ** 31:
        return int(p)
    return None


class Jet2(object):
    """
    Value, gradient and Hessian of a scalar function at one point.

    The Hessian is symmetric by construction: every update adds either
    a scalar multiple of a symmetric matrix or a symmetrised outer
    product.
    """
    __slots__ = ('value', 'gradient', 'hessian')

    def __init__(self, value, gradient, hessian):
        self.value = value
        self.gradient = gradient
        self.hessian = hessian

    @property
    def n(self):
        return self.gradient.shape[0]

    @classmethod
    def constant(cls, value, n):
        return cls(float(value), np.zeros(n), np.zeros((n, n)))

    @classmethod
    def variable(cls, index, value, n):
        gradient = np.zeros(n)
        gradient[index] = 1.0
        return cls(float(value), gradient, np.zeros((n, n)))

    def one(self):
        return Jet2.constant(1.0, self.n)

    def __neg__(self):
        return Jet2(-self.value, -self.gradient, -self.hessian)

    def __add__(self, other):
        return Jet2(self.value + other.value,
                    self.gradient + other.gradient,
                    self.hessian + other.hessian)

    def __sub__(self, other):
        return Jet2(self.value - other.value,
                    self.gradient - other.gradient,
                    self.hessian - other.hessian)

    def __mul__(self, other):
        a, b = self.value, other.value
        ga, gb = self.gradient, other.gradient
        cross = np.outer(ga, gb)
        return Jet2(a * b,
                    a * gb + b * ga,
                    a * other.hessian + b * self.hessian + cross + cross.T)

    def __truediv__(self, other):
        q = div(self.value, other.value)
        b = other.value
        gq = (self.gradient - q * other.gradient) / b
        cross = np.outer(gq, other.gradient)
        hq = (self.hessian - q * other.hessian - cross - cross.T) / b
        return Jet2(q, gq, hq)

    def chain(self, value, d1, d2):
        """Compose with a scalar function with value, f' and f'' given."""
        return Jet2(value,
                    d1 * self.gradient,
                    d1 * self.hessian + d2 * np.outer(self.gradient,
                                                      self.gradient))

    def __pow__(self, p):
        k = integer_exponent(p)
        if k is not None:
            if k >= 0:
                return ipow(self, k, self.one())
            return self.one() / ipow(self, -k, self.one())
        value = rpow(self.value, p)
        v = self.value
        return self.chain(value,
                          p * v ** (p - 1),
                          p * (p - 1) * v ** (p - 2))

    def __repr__(self):
        return 'Jet2(value=%r, gradient=%r, hessian=%r)' % (
            self.value, self.gradient.tolist(), self.hessian.tolist())


def _jet_function(name, x):
    v = x.value
    if name == 'sin':
        s, c = math.sin(v), math.cos(v)
        return x.chain(s, c, -s)
    if name == 'cos':
        s, c = math.sin(v), math.cos(v)
        return x.chain(c, -s, -c)
    if name == 'exp':
        e = fexp(v)
        return x.chain(e, e, e)
    if name == 'log':
        return x.chain(flog(v), 1.0 / v, -1.0 / (v * v))
    if name == 'sqrt':
        s = fsqrt(v)
        if s == 0:
            if np.any(x.gradient) or np.any(x.hessian):
                raise DomainError(u'sqrt is not differentiable at 0')
            return Jet2(0.0, x.gradient.copy(), x.hessian.copy())
        return x.chain(s, 0.5 / s, -0.25 / (s * v))
    raise ValueError("Unknown function %r" % name)


def _as_floats(point):
    return tuple(float(v) for v in point)


def _jet(node, point, n):
    try:
        if isinstance(node, Num):
            return Jet2.constant(node.value, n)
        if isinstance(node, Var):
            return Jet2.variable(node.index, point[node.index], n)
        if isinstance(node, Neg):
            return -_jet(node.operand, point, n)
        if isinstance(node, Call):
            return _jet_function(node.func, _jet(node.arg, point, n))
        left = _jet(node.left, point, n)
        if node.op == '^':
            return left ** node.right.value
        right = _jet(node.right, point, n)
        if node.op == '+':
            return left + right
        if node.op == '-':
            return left - right
        if node.op == '*':
            return left * right
        return left / right
    except DomainError as exc:
        raise exc.attach(node)
    except (OverflowError, ZeroDivisionError) as exc:
        raise DomainError(u'%s' % exc).attach(node)


def eval_jet2(ast, point):
    """
    Value, gradient and Hessian of the expression at point.

    The length of point is the number of declared variables.
    """
    point = _as_floats(point)
    return _jet(ast, point, len(point))


def _value(node, point):
    try:
        if isinstance(node, Num):
            return node.value
        if isinstance(node, Var):
            return point[node.index]
        if isinstance(node, Neg):
            return -_value(node.operand, point)
        if isinstance(node, Call):
            return VALUE_FUNCTIONS[node.func](_value(node.arg, point))
        left = _value(node.left, point)
        if node.op == '^':
            p = node.right.value
            k = integer_exponent(p)
            if k is None:
                return rpow(left, p)
            if k >= 0:
                return ipow(left, k)
            return div(1.0, ipow(left, -k))
        right = _value(node.right, point)
        if node.op == '+':
            return left + right
        if node.op == '-':
            return left - right
        if node.op == '*':
            return left * right
        return div(left, right)
    except DomainError as exc:
        raise exc.attach(node)
    except (OverflowError, ZeroDivisionError) as exc:
        raise DomainError(u'%s' % exc).attach(node)


def eval_value(ast, point):
    """Value of the expression at point, without derivatives."""
    return _value(ast, _as_floats(point))
