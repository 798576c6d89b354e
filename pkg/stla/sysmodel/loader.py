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
Reading and writing the JSON system document.

Document layout (keys marked ? are optional)::

    {
      "name"?:        "free text",
      "kind":         "SYMMETRIC" | "AFFINE" | "GENERAL",
      "n":            2,
      "m":            1,
      "state_vars":   ["x", "y"],
      "sigma":        [["-y"], ["x"]],           # n rows of m entries
      "sigma0"?:      ["y", "0"],                 # AFFINE only
      "controls"?:    [{"label": "up", "value": [1]}, ...],   # GENERAL
      "fields"?:      {"up": ["0", "1"], ...},                # GENERAL
      "u":            "y - 1",
      "level"?:       0,                          # default u(base_point)
      "u_list"?:      ["x", {"u": "x + y", "level": 1}],
      "distance"?:    {"type": "sphere", "center": [0, 0], "radius": 1,
                       "inside": true, "axes"?: [0, 1]}
                      | {"type": "halfspace", "normal": [0, 1],
                         "offset": 1},
      "base_point":   [0, 1]
    }

A report written by `stla analyze` is accepted too: its "system" member
is read.
"""

import io
import json
import logging
import math
import re

from stla.errors import InputError
from stla.exprcore import (
    ExpressionSyntaxError, eval_value, format_expr, parse)
from stla.sysmodel import (
    AFFINE, ControlPoint, DistanceSpec, GENERAL, KINDS, SystemSpec,
    TargetSpec)


_log = logging.getLogger(__name__)


KNOWN_KEYS = frozenset([
    'name', 'kind', 'n', 'm', 'state_vars', 'sigma', 'sigma0', 'controls',
    'fields', 'u', 'level', 'u_list', 'distance', 'base_point'])

IDENTIFIER_RE = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')
RESERVED = frozenset(['sin', 'cos', 'exp', 'sqrt', 'log', 'pi'])


class SchemaError(InputError):
    """
    The input document is malformed.  line and column point into the
    source text when they could be determined; field is the dotted path
    of the offending member.
    """
    general_message = u'Invalid system document.'

    def __init__(self, message, field=None, line=None, column=None,
                 source=None):
        where = []
        if source:
            where.append(source)
        if line is not None:
            where.append(u'line %d' % line)
            if column is not None:
                where.append(u'column %d' % column)
        prefix = u', '.join(where)
        if field:
            message = u'%s: %s' % (field, message)
        if prefix:
            message = u'%s: %s' % (prefix, message)
        InputError.__init__(self, message, field=field, line=line,
                            column=column)
        self.field = field
        self.line = line
        self.column = column


class _Document(object):
    """Raw JSON plus enough of the text to point at fields."""

    def __init__(self, data, text=None, source=None):
        self.data = data
        self.text = text
        self.source = source

    def locate(self, field):
        """Line and column of the first occurrence of field's key."""
        if not self.text or not field:
            return None, None
        key = field.split('.')[-1].split('[')[0]
        match = re.search(r'"%s"\s*:' % re.escape(key), self.text)
        if match is None:
            return None, None
        line = self.text.count('\n', 0, match.start()) + 1
        column = match.start() - (self.text.rfind('\n', 0, match.start()) + 1) + 1
        return line, column

    def fail(self, message, field=None):
        line, column = self.locate(field)
        return SchemaError(message, field=field, line=line, column=column,
                           source=self.source)

    def get(self, key, required=True):
        if key not in self.data:
            if required:
                raise SchemaError(u'missing required member', field=key,
                                  source=self.source)
            return None
        return self.data[key]

    def integer(self, key):
        value = self.get(key)
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise self.fail(u'must be a positive integer', key)
        return value

    def number(self, value, field):
        if isinstance(value, bool) or not isinstance(value, (int, float)) \
                or not math.isfinite(value):
            raise self.fail(u'must be a finite number', field)
        return float(value)

    def vector(self, value, length, field):
        if not isinstance(value, list) or len(value) != length:
            raise self.fail(u'must be a list of %d numbers' % length, field)
        return tuple(self.number(v, u'%s[%d]' % (field, i))
                     for i, v in enumerate(value))

    def expression(self, text, variables, field):
        if not isinstance(text, str):
            raise self.fail(u'must be an expression string', field)
        try:
            return parse(text, variables)
        except ExpressionSyntaxError as exc:
            raise self.fail(
                u'%s in expression %r' % (exc.message, text), field)
        except InputError as exc:
            raise self.fail(exc.message, field)

    def expressions(self, value, length, variables, field):
        if not isinstance(value, list) or len(value) != length:
            raise self.fail(
                u'must be a list of %d expression strings' % length, field)
        return tuple(self.expression(v, variables, u'%s[%d]' % (field, i))
                     for i, v in enumerate(value))


def _parse_distance(doc, value, n):
    if not isinstance(value, dict):
        raise doc.fail(u'must be an object', 'distance')
    kind = value.get('type')
    if kind == 'sphere':
        axes = value.get('axes')
        if axes is not None:
            if not isinstance(axes, list) or not axes or any(
                    isinstance(a, bool) or not isinstance(a, int)
                    or not 0 <= a < n for a in axes):
                raise doc.fail(u'axes must list state indices', 'axes')
            axes = tuple(axes)
        inside = value.get('inside', True)
        if not isinstance(inside, bool):
            raise doc.fail(u'must be true or false', 'inside')
        return DistanceSpec(
            'sphere',
            center=doc.vector(value.get('center'), n, 'distance.center'),
            radius=doc.number(value.get('radius'), 'distance.radius'),
            inside=inside, axes=axes)
    if kind == 'halfspace':
        normal = doc.vector(value.get('normal'), n, 'distance.normal')
        if not any(normal):
            raise doc.fail(u'normal must be nonzero', 'distance.normal')
        return DistanceSpec(
            'halfspace', normal=normal,
            offset=doc.number(value.get('offset'), 'distance.offset'))
    raise doc.fail(u'type must be "sphere" or "halfspace"', 'distance.type')


def _build(doc):
    data = doc.data
    if not isinstance(data, dict):
        raise SchemaError(u'top level must be an object', source=doc.source)
    if 'system' in data and 'kind' not in data:
        doc = _Document(data['system'], doc.text, doc.source)
        data = doc.data
        if not isinstance(data, dict):
            raise doc.fail(u'must be an object', 'system')

    unknown = sorted(set(data) - KNOWN_KEYS)
    if unknown:
        raise doc.fail(u'unknown member', unknown[0])

    kind = doc.get('kind')
    if not isinstance(kind, str) or kind.upper() not in KINDS:
        raise doc.fail(u'must be one of %s' % u', '.join(KINDS), 'kind')
    kind = kind.upper()
    n = doc.integer('n')
    m = doc.integer('m')

    state_vars = doc.get('state_vars')
    if not isinstance(state_vars, list) or len(state_vars) != n:
        raise doc.fail(u'must list %d variable names' % n, 'state_vars')
    for name in state_vars:
        if not isinstance(name, str) or not IDENTIFIER_RE.match(name) \
                or name in RESERVED:
            raise doc.fail(u'invalid variable name %r' % (name,),
                           'state_vars')
    if len(set(state_vars)) != n:
        raise doc.fail(u'variable names must be distinct', 'state_vars')

    sigma = sigma0 = fields = controls = None
    if kind == GENERAL:
        for key in ('sigma', 'sigma0'):
            if key in data:
                raise doc.fail(u'not allowed for GENERAL systems', key)
        raw_controls = doc.get('controls')
        if not isinstance(raw_controls, list) or not raw_controls:
            raise doc.fail(u'must be a nonempty list', 'controls')
        controls = []
        for k, entry in enumerate(raw_controls):
            where = u'controls[%d]' % k
            if not isinstance(entry, dict) \
                    or not isinstance(entry.get('label'), str):
                raise doc.fail(u'must be {"label": ..., "value": [...]}',
                               'controls')
            controls.append(ControlPoint(
                doc.vector(entry.get('value'), m, where + '.value'),
                entry['label']))
        labels = [c.label for c in controls]
        if len(set(labels)) != len(labels):
            raise doc.fail(u'labels must be distinct', 'controls')
        raw_fields = doc.get('fields')
        if not isinstance(raw_fields, dict):
            raise doc.fail(u'must map labels to expression lists', 'fields')
        extra = sorted(set(raw_fields) - set(labels))
        if extra:
            raise doc.fail(u'field for unknown control %r' % extra[0],
                           'fields')
        fields = {}
        for label in labels:
            if label not in raw_fields:
                raise doc.fail(u'missing field for control %r' % label,
                               'fields')
            fields[label] = doc.expressions(
                raw_fields[label], n, state_vars, u'fields.%s' % label)
    else:
        for key in ('controls', 'fields'):
            if key in data:
                raise doc.fail(u'only allowed for GENERAL systems', key)
        raw_sigma = doc.get('sigma')
        if not isinstance(raw_sigma, list) or len(raw_sigma) != n:
            raise doc.fail(u'must have %d rows' % n, 'sigma')
        sigma = [doc.expressions(row, m, state_vars, u'sigma[%d]' % i)
                 for i, row in enumerate(raw_sigma)]
        if kind == AFFINE:
            sigma0 = doc.expressions(
                doc.get('sigma0'), n, state_vars, 'sigma0')
        elif 'sigma0' in data:
            raise doc.fail(u'only allowed for AFFINE systems', 'sigma0')

    system = SystemSpec(kind, state_vars, m, sigma=sigma, sigma0=sigma0,
                        fields=fields, controls=controls,
                        name=data.get('name'))

    base_point = doc.vector(doc.get('base_point'), n, 'base_point')
    u = doc.expression(doc.get('u'), state_vars, 'u')

    u_list = None
    if 'u_list' in data:
        raw = data['u_list']
        if not isinstance(raw, list) or not raw:
            raise doc.fail(u'must be a nonempty list', 'u_list')
        u_list = []
        for k, entry in enumerate(raw):
            where = u'u_list[%d]' % k
            level = None
            if isinstance(entry, dict):
                level = entry.get('level')
                if level is not None:
                    level = doc.number(level, where + '.level')
                entry = entry.get('u')
            ast = doc.expression(entry, state_vars, where)
            if level is None:
                level = eval_value(ast, base_point)
            u_list.append((ast, level))
        u_list = tuple(u_list)

    distance = None
    if 'distance' in data:
        distance = _parse_distance(doc, data['distance'], n)

    if data.get("level") is None:
        level = eval_value(u, base_point)
    else:
        level = doc.number(data["level"], "level")
    target = TargetSpec(u, level, u_list=u_list, distance=distance,
                        state_vars=tuple(state_vars))

    _log.debug("Loaded %r from %s", system, doc.source or '<document>')
    return system, target, base_point


def loads_system(text, source=None):
    """Parse a JSON system document given as a string."""
    try:
        data = json.loads(text)
    except ValueError as exc:
        raise SchemaError(
            u'malformed JSON: %s' % getattr(exc, 'msg', exc),
            line=getattr(exc, 'lineno', None),
            column=getattr(exc, 'colno', None), source=source)
    return _build(_Document(data, text, source))


def load_system(path_or_document):
    """
    Load (system, target, base point) from a file path, an open file or
    an already decoded document (dict).
    """
    if isinstance(path_or_document, dict):
        return _build(_Document(path_or_document))
    if hasattr(path_or_document, 'read'):
        return loads_system(path_or_document.read(),
                            getattr(path_or_document, 'name', None))
    try:
        with io.open(path_or_document, encoding='utf-8') as handle:
            text = handle.read()
    except (IOError, OSError) as exc:
        raise InputError(u'Cannot read %s: %s' % (path_or_document, exc),
                         path=path_or_document)
    return loads_system(text, path_or_document)


def dump_system(system, target, base_point):
    """The JSON document describing system, target and base point."""
    doc = {
        'kind': system.kind,
        'n': system.n,
        'm': system.m,
        'state_vars': list(system.state_vars),
        'u': format_expr(target.u),
        'level': target.level,
        'base_point': [float(v) for v in base_point],
    }
    if system.name:
        doc['name'] = system.name
    if system.kind == GENERAL:
        doc['controls'] = [
            {'label': c.label, 'value': list(c.value)}
            for c in system.controls]
        doc['fields'] = dict(
            (label, [format_expr(e) for e in exprs])
            for label, exprs in system.fields.items())
    else:
        doc['sigma'] = [[format_expr(e) for e in row]
                        for row in system.sigma]
        if system.sigma0 is not None:
            doc['sigma0'] = [format_expr(e) for e in system.sigma0]
    if target.u_list:
        doc['u_list'] = [{'u': format_expr(u), 'level': level}
                         for u, level in target.u_list]
    if target.distance is not None:
        doc['distance'] = target.distance.to_dict()
    return doc
