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

from stla.errors import ConfigError
from stla.init.config import (
    read_stla_config, generate_validation_report)
from stla.stla_globals import setup_globals


LOG_FORMAT = '%(asctime)s %(levelname)-7.7s [%(name)s] %(message)s'


def setup_global_and_app_config(config_path):
    global_config, validation_result = read_stla_config(config_path)
    app_config = global_config['stla']
    # report errors if necessary
    validation_report = generate_validation_report(
        global_config, validation_result)
    if validation_report:
        raise ConfigError(validation_report, path=config_path)

    setup_globals(
        app_config=app_config,
        global_config=global_config,
        threads=app_config['threads'] or None)

    return global_config, app_config


def setup_logging(app_config, verbose=False):
    """
    Configure the root logger on stderr; verbose forces DEBUG.
    """
    level = 'DEBUG' if verbose else app_config['log_level'].upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format=app_config['log_format'] or LOG_FORMAT)
