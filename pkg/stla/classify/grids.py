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
Deterministic point sets on the unit sphere and ball of R^m, and a
small pattern search for polishing a grid maximum.
"""

import itertools
import logging
import math

import numpy as np


_log = logging.getLogger(__name__)

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
DEFAULT_DIRECTIONS = 256
DEFAULT_RADII = 8


def sphere_directions(m, count=DEFAULT_DIRECTIONS):
    """
    Unit vectors in R^m, as rows.

    m = 1 gives +-1, m = 2 evenly spaced angles, m = 3 a Fibonacci
    spiral; larger m use a normalised tensor grid.
    """
    if m < 1:
        return np.zeros((0, m))
    if m == 1:
        return np.array([[1.0], [-1.0]])
    if m == 2:
        angles = 2 * math.pi * np.arange(count) / count
        return np.column_stack((np.cos(angles), np.sin(angles)))
    if m == 3:
        k = np.arange(count) + 0.5
        z = 1.0 - 2.0 * k / count
        r = np.sqrt(1.0 - z * z)
        phi = GOLDEN_ANGLE * k
        return np.column_stack((r * np.cos(phi), r * np.sin(phi), z))

    levels = np.linspace(-1.0, 1.0, 5 if m <= 4 else 3)
    rows = []
    seen = set()
    for combo in itertools.product(levels, repeat=m):
        vector = np.array(combo)
        norm = np.linalg.norm(vector)
        if norm == 0.0:
            continue
        vector = vector / norm
        key = tuple(np.round(vector, 12))
        if key not in seen:
            seen.add(key)
            rows.append(vector)
    return np.array(rows)


def ball_points(m, count=DEFAULT_DIRECTIONS, radii=DEFAULT_RADII):
    """The origin plus every direction scaled by k / radii, k = 1..radii."""
    directions = sphere_directions(m, count)
    scales = np.arange(1, radii + 1) / float(radii)
    shells = [directions * s for s in scales]
    return np.vstack([np.zeros((1, m))] + shells)


def project_to_ball(a):
    norm = float(np.linalg.norm(a))
    if norm > 1.0:
        return a / norm
    return a


def maximize_on_ball(objective, start, step=1.0 / DEFAULT_RADII,
                     min_step=1e-10, max_iterations=400):
    """
    Coordinate pattern search for a local maximum of objective over the
    unit ball, starting from start.  Returns (point, value).
    """
    best = project_to_ball(np.array(start, dtype=float))
    best_value = objective(best)
    m = len(best)
    iterations = 0
    while step > min_step and iterations < max_iterations:
        iterations += 1
        improved = False
        for i in range(m):
            for sign in (1.0, -1.0):
                trial = best.copy()
                trial[i] += sign * step
                trial = project_to_ball(trial)
                value = objective(trial)
                if value > best_value:
                    best, best_value = trial, value
                    improved = True
        if not improved:
            step /= 2.0
    _log.debug("Pattern search stopped after %d iterations at %r",
               iterations, best_value)
    return best, best_value
