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

import logging

from stla.classify.scan import neighborhood_scan, write_scan_csv
from stla.commands import util as commands_util
from stla.tools.template import render_template


_log = logging.getLogger(__name__)

SCAN_FAILED = 7


def scan_parser_setup(subparser):
    commands_util.add_input_arguments(subparser)
    subparser.add_argument(
        '--box', type=float, default=None,
        help='Half side of the box around the point')
    subparser.add_argument(
        '--grid', type=int, default=None,
        help='Grid points per axis (at least 2)')
    subparser.add_argument(
        '--rho', type=float, default=None,
        help='Decay margin every grid point must reach')


def scan(args):
    system, target, point = commands_util.load_input(args)
    report = neighborhood_scan(
        system, target.u, point,
        commands_util.option(args.box, 'scan', 'box', 0.1),
        commands_util.option(args.grid, 'scan', 'grid', 5),
        commands_util.option(args.rho, 'scan', 'rho', 0.5),
        commands_util.tolerance(args))

    write_scan_csv(report, commands_util.output_path(args, 'scan.csv'),
                   system.state_vars, commands_util.digits('csv'))

    if args.json:
        commands_util.emit(commands_util.dumps_json(report.to_dict()))
    else:
        commands_util.emit(render_template('scan.txt', {
            'system': system,
            'report': report,
        }))
    return 0 if report.passed else SCAN_FAILED
