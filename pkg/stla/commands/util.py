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

import json
import logging
import os

import numpy as np

from stla import stla_globals
from stla.errors import InputError
from stla.sysmodel import registry
from stla.sysmodel.loader import load_system
from stla.tools.common import simple_printer, to_jsonable


_log = logging.getLogger(__name__)


def add_input_arguments(subparser):
    """Flags shared by the commands that work on one system."""
    source = subparser.add_mutually_exclusive_group(required=True)
    source.add_argument(
        '--example', metavar='NAME',
        help='Use a built-in example (see "stla examples")')
    source.add_argument(
        '--input', metavar='FILE',
        help='Read the system from a JSON document or an earlier report')
    subparser.add_argument(
        '--point', metavar='CSV',
        help='Work at this point instead of the base point; the target '
             'is moved to pass through it')
    subparser.add_argument(
        '--tol', type=float, default=None,
        help='Relative tolerance (default from the config file)')
    subparser.add_argument(
        '--out', metavar='DIR', default=None,
        help='Directory for the files written (default: current)')
    subparser.add_argument(
        '--json', action='store_true',
        help='Print JSON instead of the text report')


def config_section(name):
    """A section of the loaded config, or {} before setup."""
    config = stla_globals.global_config
    if config is None:
        return {}
    return config.get(name, {})


def option(value, section, key, default=None):
    """value unless None, else the config value, else default."""
    if value is not None:
        return value
    return config_section(section).get(key, default)


def parse_point(text, n):
    try:
        values = [float(v) for v in text.split(',')]
    except ValueError:
        raise InputError(u'Cannot read point %r' % text)
    if len(values) != n:
        raise InputError(u'Point %r needs %d coordinates' % (text, n))
    return np.array(values)


def load_input(args):
    """
    (system, target, point) from --example or --input, with --point
    applied.
    """
    if args.example:
        params = {}
        if args.example == 'ex3':
            params['radius'] = option(None, 'examples', 'ex3_radius', 2.0)
        system, target, point = registry.load_registry(
            args.example, **params)
    else:
        system, target, point = load_system(args.input)

    point = np.asarray(point, dtype=float)
    if getattr(args, 'point', None):
        point = parse_point(args.point, system.n)
        target = target.rebase(point)
        _log.info("Target rebased to level %r at %r",
                  target.level, tuple(point))
    return system, target, point


def tolerance(args):
    return option(args.tol, 'stla', 'tolerance', 1e-9)


def digits(kind='csv'):
    return option(None, 'stla', '%s_digits' % kind,
                  17 if kind == 'csv' else 12)


def output_path(args, filename):
    directory = args.out or os.getcwd()
    if not os.path.isdir(directory):
        try:
            os.makedirs(directory)
        except OSError as exc:
            raise InputError(u'Cannot create %s: %s' % (directory, exc))
    return os.path.join(directory, filename)


def write_json(path, data):
    """Sorted keys and a trailing newline, so reruns compare equal."""
    with open(path, 'w') as handle:
        json.dump(to_jsonable(data), handle, sort_keys=True, indent=2)
        handle.write('\n')
    _log.info("Wrote %s", path)


def dumps_json(data):
    return json.dumps(to_jsonable(data), sort_keys=True, indent=2) + '\n'


def emit(text, printer=simple_printer):
    printer(text)
