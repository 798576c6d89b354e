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

from stla.commands import util as commands_util
from stla.sysmodel.registry import list_registry
from stla.tools.template import render_template


def examples_parser_setup(subparser):
    subparser.add_argument(
        '--json', action='store_true',
        help='Print the list as JSON')


def example_dict(example):
    return {
        'name': example.name,
        'description': example.description,
        'kind': example.kind,
        'n': example.n,
        'm': example.m,
        'state_vars': list(example.state_vars),
        'u': example.u,
        'base_point': list(example.base_point),
        'expected': example.expected,
    }


def examples(args):
    entries = list_registry()
    if args.json:
        commands_util.emit(commands_util.dumps_json(
            [example_dict(e) for e in entries]))
    else:
        commands_util.emit(render_template(
            'examples.txt', {'examples': entries}))
    return 0
