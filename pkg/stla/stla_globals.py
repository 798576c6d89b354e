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
Process-wide settings shared by the commands and the library.
"""

# app and global config objects
app_config = None
global_config = None

# Worker count for scans and sweeps; None means "decide at run time"
threads = None

# Set by the test suite; keeps rendered template contexts around
testing = False


def setup_globals(**kwargs):
    """Assign module level settings by keyword; unknown names are a bug."""
    from stla import stla_globals

    for key, value in kwargs.items():
        if not hasattr(stla_globals, key):
            raise AssertionError("Global %s not known" % key)
        setattr(stla_globals, key, value)
