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

import argparse
import logging
import os
import sys

from stla.errors import BaseStlaFail
from stla.init import setup_global_and_app_config, setup_logging
from stla.tools.common import import_component


_log = logging.getLogger(__name__)


SUBCOMMAND_MAP = {
    'analyze': {
        'setup': 'stla.commands.analyze:analyze_parser_setup',
        'func': 'stla.commands.analyze:analyze',
        'help': 'Classify a boundary point and print the matrices'},
    'simulate': {
        'setup': 'stla.commands.simulate:simulate_parser_setup',
        'func': 'stla.commands.simulate:simulate',
        'help': 'Integrate a switched trajectory and check its expansion'},
    'mintime': {
        'setup': 'stla.commands.mintime:mintime_parser_setup',
        'func': 'stla.commands.mintime:mintime',
        'help': 'Fit minimum times against the offset from a point'},
    'scan': {
        'setup': 'stla.commands.scan:scan_parser_setup',
        'func': 'stla.commands.scan:scan',
        'help': 'Check the decay condition on a box around a point'},
    'examples': {
        'setup': 'stla.commands.examples:examples_parser_setup',
        'func': 'stla.commands.examples:examples',
        'help': 'List the built-in example systems'},
    }


class StlaArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, '%s: error: %s\n' % (self.prog, message))


def build_parser():
    parser = StlaArgumentParser(
        prog='stla',
        description='Small-time local attainability of targets.')
    parser.add_argument(
        '-cf', '--conf_file', default=None,
        help=(
            "Config file used to set up environment.  "
            "Default to stla_local.ini if readable, "
            "otherwise stla.ini"))
    parser.add_argument(
        '-v', '--verbose', action='store_true',
        help='Log debugging output to stderr')

    subparsers = parser.add_subparsers(
        help='sub-command help', dest='command')
    subparsers.required = True
    for command_name, command_struct in sorted(SUBCOMMAND_MAP.items()):
        if 'help' in command_struct:
            subparser = subparsers.add_parser(
                command_name, help=command_struct['help'])
        else:
            subparser = subparsers.add_parser(command_name)

        setup_func = import_component(command_struct['setup'])
        exec_func = import_component(command_struct['func'])

        setup_func(subparser)

        subparser.set_defaults(func=exec_func)
    return parser


def main(argv=None):
    """Run one subcommand; returns its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    args.orig_conf_file = args.conf_file
    if args.conf_file is None:
        if os.path.exists('stla_local.ini') \
                and os.access('stla_local.ini', os.R_OK):
            args.conf_file = 'stla_local.ini'
        else:
            args.conf_file = 'stla.ini'

    try:
        global_config, app_config = setup_global_and_app_config(
            args.conf_file)
        setup_logging(app_config, args.verbose)
        return args.func(args) or 0
    except BaseStlaFail as exc:
        _log.debug("%s: %s", exc.exception_path, exc.metadata)
        sys.stderr.write(u'%s\n%s\n' % (exc.general_message, exc.message))
        return exc.exit_code


def main_cli():
    sys.exit(main())


if __name__ == '__main__':
    main_cli()
