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
Small helpers shared by the commands and the report writers.
"""

import sys

import numpy as np


def import_component(import_string):
    """
    The object named by "package.module:attribute", importing the
    module first.  SUBCOMMAND_MAP entries are resolved this way so a
    subcommand's module is only loaded when the parser is built.
    """
    module_name, attribute = import_string.split(':', 1)
    __import__(module_name)
    return getattr(sys.modules[module_name], attribute)


def simple_printer(string):
    """Write to stdout as is; reports carry their own newlines."""
    sys.stdout.write(string)
    sys.stdout.flush()


def to_jsonable(obj):
    """
    Recursively turn numpy arrays and scalars, tuples and namedtuples
    into plain lists, floats and dicts, ready for json.dump.
    """
    if isinstance(obj, dict):
        return dict((str(k), to_jsonable(v)) for k, v in obj.items())
    if hasattr(obj, '_asdict'):
        return to_jsonable(obj._asdict())
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj
