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

from stla import classify
from stla.classify.intersection import classify_intersection
from stla.classify.necessary import check_necessary
from stla.commands import util as commands_util
from stla.sysmodel.loader import dump_system
from stla.tools.template import render_template


_log = logging.getLogger(__name__)

EXIT_CODES = {
    classify.FIRST_ORDER_PETROV: 0,
    classify.SECOND_ORDER: 0,
    classify.INCONCLUSIVE: 3,
    classify.DEGENERATE_GRADIENT: 4,
}


def analyze_parser_setup(subparser):
    commands_util.add_input_arguments(subparser)
    subparser.add_argument(
        '--directions', type=int, default=None,
        help='Size of the single field search grid for affine systems')
    subparser.add_argument(
        '--pair-directions', type=int, default=None, dest='pair_directions',
        help='Directions per factor for the bracket condition grid')


def run_analysis(args):
    """Everything analyze reports, as (document, report) ."""
    system, target, point = commands_util.load_input(args)
    tol = commands_util.tolerance(args)
    directions = commands_util.option(
        args.directions, 'classify', 'single_field_directions', 256)

    report = classify.classify_point(
        system, target.u, target.level, point, tol, directions)

    necessary = None
    if report.classification != classify.DEGENERATE_GRADIENT:
        necessary = check_necessary(
            system, target.u, point, tol,
            commands_util.option(args.pair_directions, 'classify',
                                 'necessary_directions', 64))

    intersection = None
    if target.u_list:
        intersection = classify_intersection(
            system, target.functions(), point, tol,
            seed=commands_util.option(None, 'classify', 'seed', 0),
            probe_points=commands_util.option(
                None, 'classify', 'probe_points', 8),
            probe_radius=commands_util.option(
                None, 'classify', 'probe_radius', 1e-3))

    document = {
        'system': dump_system(system, target, point),
        'analysis': report.to_dict(),
        'necessary': necessary.to_dict() if necessary else None,
        'intersection': intersection.to_dict() if intersection else None,
    }
    return document, report, necessary, intersection, system


def analyze(args):
    document, report, necessary, intersection, system = run_analysis(args)
    commands_util.write_json(
        commands_util.output_path(args, 'report.json'), document)

    if args.json:
        commands_util.emit(commands_util.dumps_json(document))
    else:
        commands_util.emit(render_template('analyze.txt', {
            'system': system,
            'report': report,
            'necessary': necessary,
            'intersection': intersection,
        }))

    if intersection is not None:
        return 0 if intersection.found else EXIT_CODES[classify.INCONCLUSIVE]
    return EXIT_CODES[report.classification]
