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
Tokenizer and precedence climbing parser for scalar expressions.

Grammar, loosest binding first::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ['^' unary]            # right associative
    atom    := NUMBER | IDENT | FUNC '(' expr ')' | '(' expr ')'

The exponent of '^' must not depend on any variable; it is folded to
a number at parse time.
"""

import re
from collections import namedtuple

from stla.errors import InputError
from stla.exprcore.jets import eval_value
from stla.exprcore.nodes import (
    BinOp, Call, CONSTANTS, FUNCTIONS, Neg, Num, Var, variables_used)


class ExpressionSyntaxError(InputError):
    general_message = u'Syntax error in expression.'

    def __init__(self, message, position, text=None):
        InputError.__init__(
            self, u'%s at offset %d' % (message, position),
            position=position, text=text)
        self.position = position
        self.text = text


class UnknownIdentifier(InputError):
    general_message = u'Unknown identifier in expression.'

    def __init__(self, name, position=None):
        InputError.__init__(
            self, u'Unknown identifier %r' % name,
            name=name, position=position)
        self.name = name
        self.position = position


Token = namedtuple('Token', ['kind', 'text', 'pos'])

TOKEN_RE = re.compile(r"""
    (?P<space>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)

BINARY_PRECEDENCE = {'+': 1, '-': 1, '*': 2, '/': 2}


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        match = TOKEN_RE.match(text, pos)
        if match is None:
            raise ExpressionSyntaxError(
                u'Unexpected character %r' % text[pos], pos, text)
        kind = match.lastgroup
        if kind != 'space':
            tokens.append(Token(kind, match.group(), pos))
        pos = match.end()
    tokens.append(Token('end', u'', len(text)))
    return tokens


class _Parser(object):
    def __init__(self, text, variables):
        self.text = text
        self.variables = dict(
            (name, index) for index, name in enumerate(variables))
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def error(self, message, token=None):
        token = token or self.current
        return ExpressionSyntaxError(message, token.pos, self.text)

    def expect(self, text):
        token = self.current
        if token.text != text or token.kind == 'end':
            if token.kind == 'end':
                raise self.error(u'Unexpected end of input, expected %r' % text)
            raise self.error(u'Expected %r, found %r' % (text, token.text))
        return self.advance()

    def parse(self):
        node = self.expression(1)
        if self.current.kind != 'end':
            raise self.error(u'Unexpected %r' % self.current.text)
        return node

    def expression(self, min_prec):
        lhs = self.unary()
        while True:
            token = self.current
            prec = BINARY_PRECEDENCE.get(token.text) \
                if token.kind == 'op' else None
            if prec is None or prec < min_prec:
                return lhs
            self.advance()
            # left associative: the right side binds strictly tighter
            rhs = self.expression(prec + 1) if prec < 2 else self.unary()
            lhs = BinOp(token.text, lhs, rhs)

    def unary(self):
        if self.current.kind == 'op' and self.current.text == '-':
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.current.kind == 'op' and self.current.text == '^':
            caret = self.advance()
            exponent_start = self.current
            exponent = self.unary()
            if variables_used(exponent):
                raise self.error(
                    u'Exponent must be constant', exponent_start)
            try:
                folded = eval_value(exponent, ())
            except Exception:
                raise self.error(u'Cannot evaluate exponent', caret)
            return BinOp('^', base, Num(float(folded)))
        return base

    def atom(self):
        token = self.current
        if token.kind == 'end':
            raise self.error(u'Unexpected end of input')
        if token.kind == 'number':
            self.advance()
            return Num(float(token.text))
        if token.kind == 'ident':
            self.advance()
            if token.text in FUNCTIONS:
                self.expect('(')
                arg = self.expression(1)
                self.expect(')')
                return Call(token.text, arg)
            if token.text in self.variables:
                return Var(self.variables[token.text], token.text)
            if token.text in CONSTANTS:
                return Num(CONSTANTS[token.text])
            raise UnknownIdentifier(token.text, token.pos)
        if token.text == '(':
            self.advance()
            node = self.expression(1)
            self.expect(')')
            return node
        raise self.error(u'Unexpected %r' % token.text)


def parse(text, variables):
    """
    Parse text into an expression tree over the given variable names.

    Raises ExpressionSyntaxError (with .position) or UnknownIdentifier.
    """
    variables = list(variables)
    if not variables:
        raise InputError(u'At least one variable must be declared')
    if len(set(variables)) != len(variables):
        raise InputError(u'Variable names must be distinct: %r' % variables)
    return _Parser(text, variables).parse()
