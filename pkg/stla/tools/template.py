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
Text reports rendered through jinja2.
"""

import math

import jinja2
import numpy as np

from stla import stla_globals
from stla import _version


SETUP_JINJA_ENVS = {}

DEFAULT_DIGITS = 12


def _digits():
    app_config = stla_globals.app_config
    if app_config:
        return app_config.get('report_digits', DEFAULT_DIGITS)
    return DEFAULT_DIGITS


def format_number(value, digits=None):
    if value is None:
        return u'-'
    return u'%.*g' % (digits or _digits(), float(value))


def format_vector(values, digits=None):
    return u'(%s)' % u', '.join(
        format_number(v, digits) for v in np.ravel(values))


def format_matrix(values, digits=None, indent=u'    '):
    """One row per line, columns aligned."""
    array = np.atleast_2d(np.asarray(values, dtype=float))
    cells = [[format_number(v, digits) for v in row] for row in array]
    width = max(len(c) for row in cells for c in row) if cells else 0
    return u'\n'.join(
        indent + u'[ ' + u'  '.join(c.rjust(width) for c in row) + u' ]'
        for row in cells)


def get_jinja_env():
    """
    The cached template environment.

    jinja2.StrictUndefined will give exceptions on references to
    undefined/unknown variables in templates.
    """
    if 'default' in SETUP_JINJA_ENVS:
        return SETUP_JINJA_ENVS['default']

    template_env = jinja2.Environment(
        loader=jinja2.PackageLoader('stla', 'templates'),
        undefined=jinja2.StrictUndefined,
        keep_trailing_newline=True,
        trim_blocks=True, lstrip_blocks=True)

    template_env.filters['num'] = format_number
    template_env.filters['vector'] = format_vector
    template_env.filters['matrix'] = format_matrix
    template_env.tests['finite'] = lambda value: math.isfinite(value)
    template_env.globals['version'] = _version.__version__

    SETUP_JINJA_ENVS['default'] = template_env
    return template_env


# We'll store context information here when doing unit tests
TEMPLATE_TEST_CONTEXT = {}


def render_template(template_path, context):
    """
    Render a template with context.

    Also stores the context if we're doing unit tests.  Helpful!
    """
    template = get_jinja_env().get_template(template_path)
    rendered = template.render(context)

    if stla_globals.testing:
        TEMPLATE_TEST_CONTEXT[template_path] = context

    return rendered


def clear_test_template_context():
    TEMPLATE_TEST_CONTEXT.clear()
