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
from stla.commands import util as commands_util
from stla.mintime import (
    default_plan, exponent_sweep, parse_deltas, parse_directions,
    write_sweep_csv)
from stla.tools.template import render_template
from stla.trajsim import DegenerateFit


_log = logging.getLogger(__name__)

TOO_MANY_UNREACHED = 6


def mintime_parser_setup(subparser):
    commands_util.add_input_arguments(subparser)
    subparser.add_argument(
        '--deltas', metavar='LO:HI:N',
        help='Offsets from the point: LO:HI:N log spaced, or a comma '
             'separated list')
    subparser.add_argument(
        '--dirs', metavar='DIRS',
        help="';' separated directions: normal, +x / -x for a state "
             "variable, or comma separated components")
    subparser.add_argument(
        '--horizon', type=float, default=None,
        help='Give up on a start point after this time')
    subparser.add_argument(
        '--step', type=float, default=None,
        help='Largest RK4 step of the oracle')
    subparser.add_argument(
        '--switch-times', type=int, default=None, dest='switch_times',
        help='Number of log spaced switch times in (0, horizon/2]')
    subparser.add_argument(
        '--random-pairs', type=int, default=None, dest='random_pairs',
        help='Seeded random control pairs added to the candidates')
    subparser.add_argument(
        '--seed', type=int, default=None)


def mintime(args):
    system, target, point = commands_util.load_input(args)
    tol = commands_util.tolerance(args)
    opt = lambda value, key, default: commands_util.option(
        value, 'mintime', key, default)

    report = classify.classify_point(
        system, target.u, target.level, point, tol,
        commands_util.option(None, 'classify', 'single_field_directions',
                             256))
    _log.info("Sweep center classified %s", report.classification)

    deltas = parse_deltas(opt(args.deltas, 'deltas', '1e-4:1e-1:8'))
    directions = parse_directions(
        opt(args.dirs, 'dirs', 'normal'), list(system.state_vars),
        report.gradient)
    plan = default_plan(
        system, point, directions, deltas, report,
        horizon=opt(args.horizon, 'horizon', 0.5),
        step=opt(args.step, 'step', 1e-3),
        step_scale=opt(None, 'step_scale', 0.01),
        switch_times=opt(args.switch_times, 'switch_times', 32),
        random_pairs=opt(args.random_pairs, 'random_pairs', 16),
        seed=opt(args.seed, 'seed', 0))

    estimate = exponent_sweep(
        system, target.u, target.level, point, plan, target, report)

    write_sweep_csv(estimate, commands_util.output_path(args, 'sweep.csv'),
                    commands_util.digits('csv'))
    document = estimate.to_dict()
    document['directions'] = [
        {'id': i, 'label': label, 'vector': vector}
        for i, (label, vector) in enumerate(plan.directions)]
    document['horizon'] = plan.horizon
    commands_util.write_json(
        commands_util.output_path(args, 'mintime.json'), document)

    if args.json:
        commands_util.emit(commands_util.dumps_json(document))
    else:
        commands_util.emit(render_template('mintime.txt', {
            'estimate': estimate,
            'plan': plan,
        }))

    if estimate.too_many_unreached(opt(None, 'unreached_fraction', 0.1)):
        _log.warning("%.0f%% of the sweep points were not reached",
                     100 * estimate.unreached_fraction)
        return TOO_MANY_UNREACHED
    if estimate.fit is None:
        raise DegenerateFit(
            u'Fewer than two sweep points reached the target within %g'
            % plan.horizon)
    return 0
