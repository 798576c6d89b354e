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
Built-in example systems.

Each entry builds a (SystemSpec, TargetSpec, base point) triple.  The
entries cover the symmetric, nonsymmetric and affine situations in
which second order attainability decides the question at a tangency
point.
"""

import logging
from collections import OrderedDict

from stla.errors import InputError
from stla.exprcore import parse
from stla.sysmodel import (
    AFFINE, DistanceSpec, SYMMETRIC, SystemSpec, TargetSpec)


_log = logging.getLogger(__name__)


class UnknownExample(InputError):
    general_message = u'No such example.'


class Example(object):
    """A registry entry; build() returns (system, target, base point)."""

    def __init__(self, name, description, kind, state_vars, m, u,
                 base_point, sigma, sigma0=None,
                 distance=None, expected=u'SECOND_ORDER'):
        self.name = name
        self.description = description
        self.kind = kind
        self.state_vars = state_vars
        self.m = m
        self.u = u
        self.base_point = tuple(float(v) for v in base_point)
        self.sigma = sigma
        self.sigma0 = sigma0
        self.distance = distance
        self.expected = expected

    @property
    def n(self):
        return len(self.state_vars)

    def build(self):
        p = lambda text: parse(text, self.state_vars)
        system = SystemSpec(
            self.kind, self.state_vars, self.m,
            sigma=[[p(e) for e in row] for row in self.sigma],
            sigma0=[p(e) for e in self.sigma0] if self.sigma0 else None,
            name=self.name)
        u = p(self.u)
        target = TargetSpec(
            u, 0.0, distance=self.distance,
            state_vars=tuple(self.state_vars)).rebase(self.base_point)
        return system, target, self.base_point


def _ex3(radius=2.0):
    radius = float(radius)
    if not radius > 1:
        raise InputError(u'ex3 needs a radius larger than 1, got %r' % radius)
    return Example(
        'ex3', u'Drift (y, 0) plus a vertical control; disc of radius r',
        AFFINE, ['x', 'y'], 1, '(x^2 + y^2)/2', (radius, 0.0),
        sigma=[['0'], ['1']], sigma0=['y', '0'],
        distance=DistanceSpec('sphere', center=(0.0, 0.0), radius=radius))


EXAMPLES = OrderedDict([
    ('ex1', lambda: Example(
        'ex1', u'Rotation field against a horizontal line',
        SYMMETRIC, ['x', 'y'], 1, 'y - 1', (0.0, 1.0),
        sigma=[['-y'], ['x']],
        distance=DistanceSpec('halfspace', normal=(0.0, 1.0), offset=1.0))),
    ('ex2', lambda: Example(
        'ex2', u'Vertical field, exterior of the unit disc',
        SYMMETRIC, ['x', 'y'], 1, '(1 - x^2 - y^2)/2', (1.0, 0.0),
        sigma=[['0'], ['1']],
        distance=DistanceSpec('sphere', center=(0.0, 0.0), radius=1.0,
                              inside=False))),
    ('ex3', _ex3),
    ('ex4', lambda: Example(
        'ex4', u'Heisenberg system, unit ball',
        SYMMETRIC, ['x', 'y', 'z'], 2, '(x^2 + y^2 + z^2)/2',
        (0.0, 0.0, 1.0),
        sigma=[['1', '0'], ['0', '1'], ['y', '-x']],
        distance=DistanceSpec('sphere', center=(0.0, 0.0, 0.0),
                              radius=1.0))),
    ('ex5', lambda: Example(
        'ex5', u'Rolling frame (cos z, sin z, 0), (0, 0, 1), unit ball',
        SYMMETRIC, ['x', 'y', 'z'], 2, '(x^2 + y^2 + z^2)/2',
        (0.0, 1.0, 0.0),
        sigma=[['cos(z)', '0'], ['sin(z)', '0'], ['0', '1']],
        distance=DistanceSpec('sphere', center=(0.0, 0.0, 0.0),
                              radius=1.0))),
    ('ex6', lambda: Example(
        'ex6', u'Slow rotation drift with radial control, unit cylinder',
        AFFINE, ['x', 'y', 'z'], 2, '(x^2 + y^2)/2', (1.0, 0.0, 0.0),
        sigma=[['x*z', '0'], ['y*z', '0'], ['0', '1']],
        sigma0=['-y/12', 'x/12', '0'],
        distance=DistanceSpec('sphere', center=(0.0, 0.0, 0.0),
                              radius=1.0, axes=(0, 1)))),
])


def get_example(name, **params):
    try:
        builder = EXAMPLES[name]
    except KeyError:
        raise UnknownExample(
            u'Unknown example %r (known: %s)' % (
                name, u', '.join(EXAMPLES)),
            name=name)
    try:
        return builder(**params)
    except TypeError:
        raise InputError(
            u"Example %s takes no parameters %s" % (name, sorted(params)))


def load_registry(name, **params):
    """
    The system, target and base point of a built-in example.

    ex3 takes a radius keyword (default 2, must exceed 1).
    """
    example = get_example(name, **params)
    _log.debug("Loading example %s", name)
    return example.build()


def list_registry():
    return [get_example(name) for name in EXAMPLES]
