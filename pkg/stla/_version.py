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

# valid version formats:
# * x.y      - final release
# * x.ya1    - alpha 1
# * x.yb1    - beta 1
# * x.yrc1   - release candidate 1
# * x.y.dev  - dev

# see http://www.python.org/dev/peps/pep-0386/

__version__ = "0.1.0.dev"
