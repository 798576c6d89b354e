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

from stla.stla_globals import setup_globals
from stla.tools.template import (
    TEMPLATE_TEST_CONTEXT, format_matrix, format_number, format_vector,
    get_jinja_env, render_template)


def test_number_formats():
    assert format_number(None) == u'-'
    assert format_number(1 - 2 ** 0.5) == u'-0.414213562373'
    assert format_number(2.5, digits=3) == u'2.5'
    assert format_vector([1.0, -0.5]) == u'(1, -0.5)'

    setup_globals(app_config={'report_digits': 4})
    assert format_number(3.14159265) == u'3.142'


def test_matrix_columns_line_up():
    text = format_matrix([[1.0, -10.0], [0.25, 2.0]], indent=u'')
    assert text.splitlines() == [u'[    1   -10 ]', u'[ 0.25     2 ]']


def test_finite_test_and_strict_undefined():
    env = get_jinja_env()
    assert env is get_jinja_env()
    template = env.from_string(
        u'{% if x is finite %}{{ x|num }}{% else %}inf{% endif %}')
    assert template.render(x=0.5) == u'0.5'
    assert template.render(x=float('inf')) == u'inf'


def test_context_is_kept_when_testing():
    render_template('examples.txt', {'examples': []})
    assert TEMPLATE_TEST_CONTEXT['examples.txt'] == {'examples': []}
