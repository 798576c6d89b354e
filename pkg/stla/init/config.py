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
Loading stla.ini against stla/config_spec.ini.
"""

import logging
import os
import pkg_resources

from configobj import ConfigObj, flatten_errors
try:
    from configobj.validate import Validator
except ImportError:
    from validate import Validator


_log = logging.getLogger(__name__)


CONFIG_SPEC_PATH = pkg_resources.resource_filename(
    'stla', 'config_spec.ini')


def _add_path_defaults(config, config_path):
    # %(here)s and %(__file__)s in values, as in paste deploy files
    defaults = config.setdefault('DEFAULT', {})
    defaults['here'] = os.path.dirname(config_path)
    defaults['__file__'] = config_path


def read_stla_config(config_path, config_spec=CONFIG_SPEC_PATH):
    """
    Parse config_path, converting values to the types config_spec
    declares and filling in its defaults.

    A missing file is not an error: every key then has its spec
    default.  Validation problems are not raised either; they come back
    in the second element of the (config, validation_result) pair for
    generate_validation_report.
    """
    config_path = os.path.abspath(config_path)
    if not os.path.exists(config_path):
        _log.debug("No config file at %s, using defaults", config_path)

    spec = ConfigObj(
        config_spec, encoding='UTF8', list_values=False, _inspec=True)
    _add_path_defaults(spec, config_path)

    config = ConfigObj(
        config_path, configspec=spec, interpolation='ConfigParser')
    _add_path_defaults(config, config_path)

    validation_result = config.validate(Validator(), preserve_errors=True)
    return config, validation_result


REPORT_HEADER = u"""\
The config file has values of the wrong type:
---------------------------------------------
"""


def generate_validation_report(config, validation_result):
    """
    One "section:key = problem" line per bad value under
    REPORT_HEADER, or None when everything converted.  Keys that are
    merely absent are not reported; the spec default covers them.
    """
    lines = []
    for sections, key, error in flatten_errors(config, validation_result):
        if error is False:
            continue
        path = list(sections) + [key if key is not None
                                 else u'[missing section]']
        lines.append(u'%s = %s' % (u':'.join(path), error))

    if not lines:
        return None
    return REPORT_HEADER + u'\n'.join(lines)
