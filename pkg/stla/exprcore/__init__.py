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
Scalar expressions in named variables, with exact first and second
derivatives through second order jets.

    >>> ast = parse("(x^2 + y^2)/2", ["x", "y"])
    >>> jet = eval_jet2(ast, (1.0, 0.0))
    >>> jet.value, jet.gradient.tolist()
    (0.5, [1.0, 0.0])
"""

from stla.exprcore.nodes import (
    BinOp, Call, CONSTANTS, FUNCTIONS, Neg, Num, Var, format_expr,
    variables_used)
from stla.exprcore.parser import (
    ExpressionSyntaxError, UnknownIdentifier, parse, tokenize)
from stla.exprcore.jets import DomainError, Jet2, eval_jet2, eval_value
from stla.exprcore.compiler import CompiledVector, compile_vector


__all__ = [
    'BinOp', 'Call', 'CONSTANTS', 'FUNCTIONS', 'Neg', 'Num', 'Var',
    'format_expr', 'variables_used',
    'ExpressionSyntaxError', 'UnknownIdentifier', 'parse', 'tokenize',
    'DomainError', 'Jet2', 'eval_jet2', 'eval_value',
    'CompiledVector', 'compile_vector',
]
