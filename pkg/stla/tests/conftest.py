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

from stla.stla_globals import setup_globals
from stla.sysmodel.loader import load_system
from stla.sysmodel.registry import load_registry
from stla.tests.tools import fixture_path
from stla.tools.template import clear_test_template_context


@pytest.fixture()
def pt_fixture_enable_testing():
    """
    py.test fixture to enable testing mode in tools.
    """
    setup_globals(testing=True)
    clear_test_template_context()


@pytest.fixture(autouse=True)
def reset_globals():
    """Commands install their config in stla_globals; drop it afterwards."""
    yield
    setup_globals(app_config=None, global_config=None, threads=None)


@pytest.fixture()
def example():
    """Load a built-in example: example('ex4') -> (system, target, point)."""
    return load_registry


@pytest.fixture()
def fixture_system():
    """Load a JSON system from the test directory by file name."""
    def loader(filename):
        return load_system(fixture_path(filename))
    return loader


@pytest.fixture()
def outdir(tmpdir):
    return str(tmpdir.mkdir('out'))
