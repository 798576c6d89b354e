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
Small worker pool used by scans and sweeps.

Results always come back in input order, whatever order the workers
finish in, so outputs stay byte-identical between runs.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor

from stla import stla_globals


_log = logging.getLogger(__name__)

THREADS_ENV = 'STLA_THREADS'


def worker_count(requested=None):
    """
    Number of workers to use.

    Order of precedence: the explicit request, stla_globals.threads,
    the cpu count.  STLA_THREADS, when set to a positive integer, caps
    whatever was picked.
    """
    count = requested or stla_globals.threads or os.cpu_count() or 1

    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            cap = int(cap)
        except ValueError:
            _log.warning("Ignoring non-integer %s=%r", THREADS_ENV, cap)
        else:
            if cap > 0:
                count = min(count, cap)

    return max(1, int(count))


def ordered_map(func, items, workers=None):
    """
    Apply func to every item, possibly concurrently, and return the
    results as a list in the order of items.

    The first exception raised by any call propagates.
    """
    items = list(items)
    workers = min(worker_count(workers), len(items) or 1)

    if workers == 1:
        return [func(item) for item in items]

    _log.debug("Mapping %d items over %d workers", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
