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
Controlled systems and targets.

A SystemSpec comes in three kinds:

 - SYMMETRIC:  f(x, a) = sigma(x) a,              |a| <= 1
 - AFFINE:     f(x, a) = sigma0(x) + sigma(x) a,   |a| <= 1
 - GENERAL:    a finite list of labelled controls, each with its own
               vector field f(., a_k)

Targets are sublevel sets {u <= level} of a smooth function, optionally
intersected with further sublevel sets.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from stla.errors import InputError
from stla.exprcore import (
    BinOp, Num, compile_vector, eval_jet2, eval_value, variables_used)


_log = logging.getLogger(__name__)


GENERAL = u'GENERAL'
SYMMETRIC = u'SYMMETRIC'
AFFINE = u'AFFINE'
KINDS = (GENERAL, SYMMETRIC, AFFINE)

# |a| <= 1 is enforced with this much slack
BALL_SLACK = 1e-12


class InvalidControl(InputError):
    general_message = u'Invalid control for this system.'


class KindMismatch(InputError):
    general_message = u'Operation not available for this kind of system.'


###################
# Controls
###################

@dataclass(frozen=True)
class ControlPoint(object):
    """
    One admissible control value.  For GENERAL systems the label names
    the field; for ball constrained kinds label is None.
    """
    value: Tuple[float, ...]
    label: Optional[str] = None

    @property
    def vector(self):
        return np.array(self.value, dtype=float)

    def describe(self):
        if self.label is not None:
            return self.label
        return u'(%s)' % u', '.join(u'%.12g' % v for v in self.value)


###################
# Systems
###################

class SystemSpec(object):
    """
    An immutable controlled system.

    Expressions are stored as trees; compiled evaluators are built on
    first use and cached on the instance.
    """

    def __init__(self, kind, state_vars, m, sigma=None, sigma0=None,
                 fields=None, controls=None, name=None):
        kind = kind.upper()
        if kind not in KINDS:
            raise InputError(u'Unknown system kind %r' % kind)
        self.kind = kind
        self.state_vars = tuple(state_vars)
        self.m = int(m)
        self.name = name

        if kind == GENERAL:
            if not controls:
                raise InputError(u'GENERAL systems need at least one control')
            labels = [c.label for c in controls]
            if None in labels or len(set(labels)) != len(labels):
                raise InputError(
                    u'GENERAL control labels must be present and distinct')
            missing = [l for l in labels if l not in (fields or {})]
            if missing:
                raise InputError(u'No field given for controls %s' % missing)
            self.controls = tuple(controls)
            self.fields = dict(
                (label, tuple(fields[label])) for label in labels)
            self.sigma = None
            self.sigma0 = None
        else:
            if sigma is None:
                raise InputError(u'%s systems need sigma' % kind)
            self.sigma = tuple(tuple(row) for row in sigma)
            if kind == AFFINE:
                if sigma0 is None:
                    raise InputError(u'AFFINE systems need sigma0')
                self.sigma0 = tuple(sigma0)
            else:
                self.sigma0 = None
            self.controls = None
            self.fields = None

        self._check_shapes()
        self._compiled = {}

    @property
    def n(self):
        return len(self.state_vars)

    @property
    def ball_constrained(self):
        return self.kind != GENERAL

    def _check_shapes(self):
        n, m = self.n, self.m
        exprs = []
        if self.kind == GENERAL:
            for control in self.controls:
                if len(control.value) != m:
                    raise InputError(
                        u'Control %s has %d components, expected %d' % (
                            control.label, len(control.value), m))
                if len(self.fields[control.label]) != n:
                    raise InputError(
                        u'Field %s has %d components, expected %d' % (
                            control.label,
                            len(self.fields[control.label]), n))
                exprs.extend(self.fields[control.label])
        else:
            if len(self.sigma) != n or any(len(r) != m for r in self.sigma):
                raise InputError(u'sigma must be an %dx%d grid' % (n, m))
            for row in self.sigma:
                exprs.extend(row)
            if self.sigma0 is not None:
                if len(self.sigma0) != n:
                    raise InputError(u'sigma0 must have %d components' % n)
                exprs.extend(self.sigma0)
        for expr in exprs:
            if any(i >= n for i in variables_used(expr)):
                raise InputError(u'Expression uses an undeclared variable')

    ## compiled evaluators

    def _compiled_for(self, key, asts):
        func = self._compiled.get(key)
        if func is None:
            func = compile_vector(asts, self.n)
            self._compiled[key] = func
        return func

    def sigma_at(self, x):
        """sigma(x) as an n x m array."""
        func = self._compiled_for(
            'sigma', [e for row in self.sigma for e in row])
        return np.array(func(x)).reshape(self.n, self.m)

    def sigma0_at(self, x):
        func = self._compiled_for('sigma0', self.sigma0)
        return np.array(func(x))

    def general_field_at(self, label, x):
        func = self._compiled_for(('field', label), self.fields[label])
        return np.array(func(x))

    ## controls

    def control(self, a):
        """
        Normalize a into a ControlPoint valid for this system.

        Ball constrained kinds take a vector (or ControlPoint); GENERAL
        systems take a label, a ControlPoint, or a vector equal to one
        of the listed control values.
        """
        if self.kind == GENERAL:
            return self._general_control(a)

        if isinstance(a, ControlPoint):
            value = a.value
        else:
            value = tuple(float(v) for v in np.atleast_1d(a))
        if len(value) != self.m:
            raise InputError(
                u'Control has %d components, expected %d' % (
                    len(value), self.m),
                control=value)
        norm = math.sqrt(sum(v * v for v in value))
        if not norm <= 1 + BALL_SLACK:
            raise InvalidControl(
                u'Control %r lies outside the unit ball (|a| = %.17g)' % (
                    value, norm),
                control=value)
        return ControlPoint(value)

    def _general_control(self, a):
        if isinstance(a, ControlPoint):
            if a.label in self.fields:
                return a
            a = a.value
        if isinstance(a, str):
            for control in self.controls:
                if control.label == a:
                    return control
            raise InvalidControl(u'Unknown control label %r' % a, label=a)
        value = tuple(float(v) for v in np.atleast_1d(a))
        for control in self.controls:
            if control.value == value:
                return control
        raise InvalidControl(
            u'Control %r is not one of the listed controls' % (value,),
            control=value)

    def admissible_controls(self):
        """The finite control list of a GENERAL system."""
        if self.kind != GENERAL:
            raise KindMismatch(
                u'Only GENERAL systems have a finite control list')
        return self.controls

    ## jets

    def column_jets(self, x):
        """
        Jets of every column field at x as (values, jacobians).

        values[j] is the n-vector of column j, jacobians[j] its n x n
        spatial Jacobian.  Index 0 is the drift sigma0 (zero for
        SYMMETRIC systems), 1..m the columns of sigma.
        """
        if self.kind == GENERAL:
            raise KindMismatch(u'GENERAL systems have no column fields')
        n, m = self.n, self.m
        values = np.zeros((m + 1, n))
        jacobians = np.zeros((m + 1, n, n))
        for i in range(n):
            if self.sigma0 is not None:
                jet = eval_jet2(self.sigma0[i], x)
                values[0, i] = jet.value
                jacobians[0, i] = jet.gradient
            for j in range(m):
                jet = eval_jet2(self.sigma[i][j], x)
                values[j + 1, i] = jet.value
                jacobians[j + 1, i] = jet.gradient
        return values, jacobians

    def field_function(self, a):
        """
        f(., a) as a fast callable x -> n-vector, for integration.
        """
        a = self.control(a)
        if self.kind == GENERAL:
            label = a.label
            return lambda x: self.general_field_at(label, x)
        vector = a.vector
        if self.kind == SYMMETRIC:
            return lambda x: self.sigma_at(x) @ vector
        return lambda x: self.sigma0_at(x) + self.sigma_at(x) @ vector

    def expressions(self):
        """Every expression of the system, for echoing or inspection."""
        if self.kind == GENERAL:
            return dict((label, self.fields[label])
                        for label in sorted(self.fields))
        out = {'sigma': self.sigma}
        if self.sigma0 is not None:
            out['sigma0'] = self.sigma0
        return out

    def __repr__(self):
        return '<SystemSpec %s n=%d m=%d%s>' % (
            self.kind, self.n, self.m,
            ' %s' % self.name if self.name else '')


###################
# Targets
###################

@dataclass(frozen=True)
class DistanceSpec(object):
    """
    Closed form distance to the target.

    kind 'sphere': the ball (inside=True) or the complement of the ball
    (inside=False) of the given center and radius, measured over the
    coordinates in axes (all when None; a proper subset gives
    cylinders).  kind 'halfspace': the set {normal . x <= offset}.
    """
    kind: str
    center: Tuple[float, ...] = ()
    radius: float = 0.0
    inside: bool = True
    axes: Optional[Tuple[int, ...]] = None
    normal: Tuple[float, ...] = ()
    offset: float = 0.0

    def _radial(self, x):
        x = np.asarray(x, dtype=float)
        center = np.asarray(self.center, dtype=float)
        axes = list(self.axes) if self.axes is not None \
            else list(range(len(x)))
        return float(np.linalg.norm(x[axes] - center[axes]))

    def distance(self, x):
        if self.kind == 'sphere':
            r = self._radial(x)
            if self.inside:
                return max(r - self.radius, 0.0)
            return max(self.radius - r, 0.0)
        normal = np.asarray(self.normal, dtype=float)
        signed = (float(normal @ np.asarray(x, dtype=float)) - self.offset)
        return max(signed / float(np.linalg.norm(normal)), 0.0)

    def rebase(self, point):
        if self.kind == 'sphere':
            return replace(self, radius=self._radial(point))
        normal = np.asarray(self.normal, dtype=float)
        return replace(
            self, offset=float(normal @ np.asarray(point, dtype=float)))

    def to_dict(self):
        if self.kind == 'sphere':
            out = {'type': 'sphere', 'center': list(self.center),
                   'radius': self.radius, 'inside': self.inside}
            if self.axes is not None:
                out['axes'] = list(self.axes)
            return out
        return {'type': 'halfspace', 'normal': list(self.normal),
                'offset': self.offset}


@dataclass(frozen=True)
class TargetSpec(object):
    """
    The target {x : u(x) <= level}, intersected with
    {u_i(x) <= level_i} for every entry of u_list when given.
    """
    u: object
    level: float
    u_list: Optional[Tuple[Tuple[object, float], ...]] = None
    distance: Optional[DistanceSpec] = None
    state_vars: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not math.isfinite(self.level):
            raise InputError(u'Target level must be finite')
        if self.u_list is not None:
            if not self.u_list:
                raise InputError(u'Intersection list must not be empty')
            for _, level in self.u_list:
                if not math.isfinite(level):
                    raise InputError(u'Target levels must be finite')

    def functions(self):
        """All (u, level) pairs defining the target."""
        pairs = [(self.u, self.level)]
        if self.u_list:
            pairs.extend(self.u_list)
        return pairs

    def contains(self, x, slack=0.0):
        return all(eval_value(u, x) <= level + slack
                   for u, level in self.functions())

    def rebase(self, point):
        """The same target family passing through point."""
        u_list = None
        if self.u_list:
            u_list = tuple((u, eval_value(u, point)) for u, _ in self.u_list)
        distance = self.distance.rebase(point) if self.distance else None
        return replace(self, level=eval_value(self.u, point),
                       u_list=u_list, distance=distance)


def target_distance(target, x):
    """d(x) for targets with a closed form distance, else None."""
    if target.distance is None:
        return None
    return target.distance.distance(x)


###################
# Field operations
###################

def field_value(sys, x, a):
    """f(x, a)."""
    a = sys.control(a)
    x = np.asarray(x, dtype=float)
    if sys.kind == GENERAL:
        return sys.general_field_at(a.label, x)
    value = sys.sigma_at(x) @ a.vector
    if sys.kind == AFFINE:
        value = sys.sigma0_at(x) + value
    return value


def field_jacobian(sys, x, a):
    """
    Spatial Jacobian Df(., a)(x), assembled row by row from the
    gradients of the components.
    """
    a = sys.control(a)
    x = np.asarray(x, dtype=float)
    if sys.kind == GENERAL:
        return np.array([eval_jet2(e, x).gradient for e in sys.fields[a.label]])
    _, jacobians = sys.column_jets(x)
    weights = np.concatenate(([1.0], a.vector))
    return np.tensordot(weights, jacobians, axes=1)


def lie_bracket(sys, x, a1, a2):
    """[f, g](x) = Dg f - Df g with f = f(., a1), g = f(., a2)."""
    f = field_value(sys, x, a1)
    g = field_value(sys, x, a2)
    return field_jacobian(sys, x, a2) @ f - field_jacobian(sys, x, a1) @ g


def to_general(sys, controls, labels=None):
    """
    Sample a ball constrained system at finitely many controls.

    The returned GENERAL system has one field per control, built
    symbolically as sigma0 + sum_j a_j sigma_j.
    """
    if sys.kind == GENERAL:
        raise KindMismatch(u'System is already GENERAL')
    points = [sys.control(a) for a in controls]
    if labels is None:
        labels = [u'c%d' % k for k in range(len(points))]
    fields = {}
    general_controls = []
    for label, point in zip(labels, points):
        components = []
        for i in range(sys.n):
            expr = sys.sigma0[i] if sys.sigma0 is not None else None
            for j, weight in enumerate(point.value):
                if weight == 0:
                    continue
                term = BinOp('*', Num(weight), sys.sigma[i][j])
                expr = term if expr is None else BinOp('+', expr, term)
            components.append(expr if expr is not None else Num(0.0))
        fields[label] = tuple(components)
        general_controls.append(ControlPoint(point.value, label))
    _log.debug("Sampled %s at %d controls", sys, len(points))
    return SystemSpec(GENERAL, sys.state_vars, sys.m,
                      fields=fields, controls=general_controls,
                      name=sys.name)
