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

import numpy as np

from stla import classify
from stla.commands import util as commands_util
from stla.errors import InputError
from stla.exprcore import eval_value
from stla.hamilton import exact_decay_margin
from stla.sysmodel import GENERAL
from stla.tools.template import render_template
from stla.trajsim import (
    bracket_deflection, integrate_switched, taylor_order_report,
    write_trajectory_csv)


_log = logging.getLogger(__name__)


def simulate_parser_setup(subparser):
    commands_util.add_input_arguments(subparser)
    controls = subparser.add_mutually_exclusive_group()
    controls.add_argument(
        '--witness', action='store_true',
        help='Use the controls found by the classifier (the default)')
    controls.add_argument(
        '--a1', metavar='CONTROL',
        help='First control: comma separated values, or a label for '
             'GENERAL systems')
    subparser.add_argument(
        '--a2', metavar='CONTROL',
        help='Second control (defaults to --a1)')
    subparser.add_argument(
        '--t', type=float, default=None,
        help='Time spent on each control')
    subparser.add_argument(
        '--step', type=float, default=None,
        help='RK4 step (lowered so the switch is a grid node)')
    subparser.add_argument(
        '--no-order', action='store_true', dest='no_order',
        help='Skip the residual sweep over t = 2^-k')


def parse_control(system, text):
    if system.kind == GENERAL:
        return system.control(text.strip())
    try:
        values = [float(v) for v in text.split(',')]
    except ValueError:
        raise InputError(u'Cannot read control %r' % text)
    return system.control(values)


def pick_controls(args, system, target, point, tol):
    """(a1, a2, source) from the flags, or from the classifier."""
    if args.a1 is not None:
        a1 = parse_control(system, args.a1)
        a2 = parse_control(system, args.a2) if args.a2 else a1
        return a1, a2, u'given'
    if args.a2 is not None:
        raise InputError(u'--a2 needs --a1')

    report = classify.classify_point(
        system, target.u, target.level, point, tol,
        commands_util.option(None, 'classify', 'single_field_directions',
                             256))
    if report.classification == classify.SECOND_ORDER:
        a1, a2 = report.witness
        return a1, a2, u'witness'
    if report.classification == classify.FIRST_ORDER_PETROV:
        return report.petrov_control, report.petrov_control, u'petrov'
    raise InputError(
        u'No controls to simulate: the point is %s; pass --a1/--a2'
        % report.classification, classification=report.classification)


def simulate(args):
    system, target, point = commands_util.load_input(args)
    tol = commands_util.tolerance(args)
    a1, a2, source = pick_controls(args, system, target, point, tol)

    t = commands_util.option(args.t, 'simulate', 't', 0.1)
    step = commands_util.option(args.step, 'simulate', 'step', 1e-4)
    if not t > 0 or not step > 0:
        raise InputError(u'--t and --step must be positive')

    record = integrate_switched(system, point, a1, a2, t, step, u=target.u)
    write_trajectory_csv(
        record, commands_util.output_path(args, 'trajectory.csv'),
        system, digits=commands_util.digits('csv'))

    margin = exact_decay_margin(system, target.u, point, a1, a2)
    u_start = eval_value(target.u, point)
    summary = {
        'controls': {'source': source,
                     'a1': {'value': a1.value, 'label': a1.label},
                     'a2': {'value': a2.value, 'label': a2.label}},
        't': t,
        'step': record.step,
        'endpoint': record.endpoint,
        'u_start': u_start,
        'u_end': float(record.u_values[-1]),
        'u_min': float(np.min(record.u_values)),
        'decay_margin': margin,
        'bracket_deflection': bracket_deflection(
            system, point, a1, a2, t, step),
        'order': None,
    }

    order = None
    if not args.no_order:
        order = taylor_order_report(
            system, target.u, point, a1, a2,
            exponents=commands_util.option(
                None, 'simulate', 'order_exponents', list(range(4, 11))),
            divisor=commands_util.option(
                None, 'simulate', 'step_divisor', 1000))
        summary['order'] = {
            'ts': order.ts,
            'state_residuals': order.state_residuals,
            'value_residuals': order.value_residuals,
            'state_fit': _fit_dict(order.state_fit),
            'value_fit': _fit_dict(order.value_fit),
        }
    commands_util.write_json(
        commands_util.output_path(args, 'simulate.json'), summary)

    if args.json:
        commands_util.emit(commands_util.dumps_json(summary))
    else:
        commands_util.emit(render_template('simulate.txt', {
            'system': system,
            'a1': a1, 'a2': a2, 'source': source,
            'summary': summary,
            'order': order,
        }))
    return 0


def _fit_dict(fit):
    if fit is None:
        return u'exact'
    return fit._asdict()
