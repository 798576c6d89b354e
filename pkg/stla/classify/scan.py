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
Scan a box around a point for the second order decay condition.

At every grid point the decay margin of the base point's witness pair
is compared against rho; the best margin over all candidate pairs, the
Petrov margin and the sign of grad u . (f1 + f2) are reported too.
"""

import csv
import itertools
import logging
from collections import namedtuple
from dataclasses import dataclass, field
from typing import List

import numpy as np

from stla.classify import SECOND_ORDER, classify_point, petrov_margin
from stla.errors import InputError
from stla.exprcore import eval_jet2, eval_value
from stla.hamilton import exact_decay_margin
from stla.sysmodel import GENERAL, field_value
from stla.tools.common import to_jsonable
from stla.tools.pool import ordered_map


_log = logging.getLogger(__name__)


ScanPoint = namedtuple('ScanPoint', [
    'index', 'point', 'witness_margin', 'best_margin', 'petrov_margin',
    'outward', 'projection_ok'])


@dataclass
class ScanReport(object):
    center: tuple
    radius: float
    grid: int
    rho: float
    witness: tuple
    points: List[ScanPoint] = field(default_factory=list)

    @property
    def min_margin(self):
        return min(p.best_margin for p in self.points)

    @property
    def min_witness_margin(self):
        return min(p.witness_margin for p in self.points)

    @property
    def violating(self):
        """Grid points where the witness pair decays slower than rho."""
        return [p for p in self.points if not p.witness_margin >= self.rho]

    @property
    def outward(self):
        return [p for p in self.points if p.outward]

    @property
    def decay_holds(self):
        return not self.violating

    @property
    def projection_holds(self):
        return all(p.projection_ok for p in self.points)

    @property
    def passed(self):
        return self.decay_holds

    def to_dict(self):
        return to_jsonable({
            'center': self.center,
            'radius': self.radius,
            'grid': self.grid,
            'rho': self.rho,
            'witness': self.witness,
            'min_margin': self.min_margin,
            'min_witness_margin': self.min_witness_margin,
            'witness_condition_holds': self.decay_holds,
            'projection_condition_holds': self.projection_holds,
            'violating': [p.index for p in self.violating],
            'outward': [p.index for p in self.outward],
        })


def box_grid(center, radius, k):
    """Points of the axis aligned box of half side radius, k per axis."""
    axes = [np.linspace(c - radius, c + radius, k) for c in center]
    return [np.array(p) for p in itertools.product(*axes)]


def _candidate_pairs(sys, report):
    pairs = [report.witness_vectors()]
    if sys.kind == GENERAL:
        pairs.extend((c1.vector, c2.vector)
                     for c1 in sys.controls for c2 in sys.controls)
    else:
        pairs.extend((c.a1, c.a2) for c in report.candidates)
        a1, a2 = pairs[0]
        pairs.append((-a1, -a2))
    return pairs


def _negated(sys, a1, a2):
    """The negated pair; GENERAL systems have none."""
    if sys.kind == GENERAL:
        return None
    return -a1, -a2


def neighborhood_scan(sys, u, center, radius, k, rho, tol=1e-9,
                      witness=None, workers=None):
    """
    Evaluate the decay condition on a k^n grid around center.

    witness defaults to the pair found by classify_point at center; a
    center that is not SECOND_ORDER without an explicit witness is an
    InputError.
    """
    if not radius > 0:
        raise InputError(u'Scan radius must be positive, got %r' % radius)
    if int(k) != k or k < 2:
        raise InputError(u'Scan grid needs at least 2 points per axis, '
                         u'got %r' % k)
    if not rho > 0:
        raise InputError(u'rho must be positive, got %r' % rho)
    center = np.asarray(center, dtype=float)

    base = classify_point(sys, u, eval_value(u, center), center, tol)
    if witness is None:
        if base.classification != SECOND_ORDER:
            raise InputError(
                u'No witness pair: center classified %s'
                % base.classification, classification=base.classification)
        witness = base.witness_vectors()
    else:
        witness = tuple(np.asarray(a, dtype=float) for a in witness)
        base.witness = tuple(sys.control(a) for a in witness)
    pairs = _candidate_pairs(sys, base)
    a1, a2 = witness
    negated = _negated(sys, a1, a2)

    def evaluate(item):
        index, point = item
        witness_margin = exact_decay_margin(sys, u, point, a1, a2)
        best = max(exact_decay_margin(sys, u, point, b1, b2)
                   for b1, b2 in pairs)
        petrov = petrov_margin(sys, u, point).margin
        gradient = eval_jet2(u, point).gradient
        scale = 1.0 + float(np.linalg.norm(gradient))
        outward = petrov < -tol * scale

        total = field_value(sys, point, a1) + field_value(sys, point, a2)
        projection_ok = float(gradient @ total) <= tol * scale
        if not projection_ok and negated is not None:
            total = field_value(sys, point, negated[0]) \
                + field_value(sys, point, negated[1])
            projection_ok = float(gradient @ total) <= tol * scale
        return ScanPoint(index, tuple(float(v) for v in point),
                         witness_margin, best, petrov, outward, projection_ok)

    grid = box_grid(center, radius, int(k))
    _log.info("Scanning %d points around %r", len(grid), tuple(center))
    points = ordered_map(evaluate, list(enumerate(grid)), workers)

    report = ScanReport(tuple(float(v) for v in center), float(radius),
                        int(k), float(rho), witness, points)
    if report.violating:
        _log.warning("%d of %d grid points violate the decay condition",
                     len(report.violating), len(points))
    return report


def write_scan_csv(report, path, state_vars, digits=17):
    """One row per grid point: coordinates, margins and the two flags."""
    fmt = u'%%.%dg' % digits
    with open(path, 'w', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(
            [u'index'] + list(state_vars)
            + [u'witness_margin', u'best_margin', u'petrov_margin',
               u'outward', u'projection_ok', u'violating'])
        for p in report.points:
            writer.writerow(
                [p.index] + [fmt % v for v in p.point]
                + [fmt % p.witness_margin, fmt % p.best_margin,
                   fmt % p.petrov_margin, int(p.outward),
                   int(p.projection_ok),
                   int(not p.witness_margin >= report.rho)])
    _log.info("Wrote %d scan rows to %s", len(report.points), path)
