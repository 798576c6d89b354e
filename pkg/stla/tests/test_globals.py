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

import pytest

from stla import stla_globals
from stla.stla_globals import setup_globals


def test_setup_globals():
    setup_globals(threads=4, app_config={'tolerance': 1e-3})

    assert stla_globals.threads == 4
    assert stla_globals.app_config == {'tolerance': 1e-3}

    # unknown globals are rejected
    with pytest.raises(AssertionError):
        setup_globals(no_such_global=True)
