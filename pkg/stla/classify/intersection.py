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
Targets given as intersections {u_1 <= l_1} n ... n {u_k <= l_k}.

One pair (a1, a2) has to serve every u_i: either the summed field
f1 + f2 is a positive multiple of a single field f(., abar) pointing
strictly into {u_i <= l_i}, or f1 + f2 is tangent to it and the pair
decays at second order.

For ball constrained kinds the multiple is exact everywhere (symmetric:
abar = (a1 + a2)/|a1 + a2|; affine: lambda = 2, abar = (a1 + a2)/2).
For GENERAL systems the identity can only be probed: it is checked at
the point and at a few random nearby points.
"""

import logging
from collections import namedtuple
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from stla.classify import SECOND_ORDER, classify_point, grids
from stla.errors import InputError
from stla.exprcore import eval_jet2
from stla.hamilton import exact_decay_margin
from stla.sysmodel import AFFINE, GENERAL, SYMMETRIC, field_value
from stla.tools.common import to_jsonable


_log = logging.getLogger(__name__)

FIRST_ORDER = u'FIRST_ORDER'
SECOND_ORDER_TAG = u'SECOND_ORDER'
NOT_FOUND = u'NOT_FOUND'

PROBE_POINTS = 8
PROBE_RADIUS = 1e-3
PAIR_DIRECTIONS = 16


PartVerdict = namedtuple('PartVerdict', ['index', 'tag', 'margin'])


@dataclass
class IntersectionReport(object):
    point: tuple
    found: bool = False
    pair: Optional[tuple] = None
    parts: List[PartVerdict] = field(default_factory=list)
    pairs_tried: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def verdict(self):
        return u'FOUND' if self.found else NOT_FOUND

    def to_dict(self):
        return to_jsonable({
            'point': self.point, 'verdict': self.verdict,
            'pair': self.pair,
            'parts': [p._asdict() for p in self.parts],
            'pairs_tried': self.pairs_tried, 'notes': self.notes})


def _first_order_field(sys, x, a1, a2, probes, tol):
    """
    (lambda, abar) with lambda f(., abar) = f(., a1) + f(., a2), or None.
    """
    if sys.kind == SYMMETRIC:
        total = a1 + a2
        norm = float(np.linalg.norm(total))
        if norm <= tol:
            return None
        return norm, total / norm
    if sys.kind == AFFINE:
        return 2.0, (a1 + a2) / 2.0

    total = field_value(sys, x, a1) + field_value(sys, x, a2)
    for control in sys.controls:
        single = field_value(sys, x, control)
        denominator = float(single @ single)
        if denominator == 0.0:
            continue
        lam = float(single @ total) / denominator
        if lam <= 0:
            continue
        if all(_identity_holds(sys, p, a1, a2, control, lam, tol)
               for p in [x] + probes):
            return lam, control.vector
    return None


def _identity_holds(sys, p, a1, a2, control, lam, tol):
    total = field_value(sys, p, a1) + field_value(sys, p, a2)
    gap = lam * field_value(sys, p, control) - total
    return float(np.linalg.norm(gap)) \
        <= tol * (1.0 + float(np.linalg.norm(total)))


def _part_verdict(sys, index, u, x, a1, a2, first_order, tol):
    gradient = eval_jet2(u, x).gradient
    gnorm = float(np.linalg.norm(gradient))
    if first_order is not None:
        lam, abar = first_order
        single = field_value(sys, x, abar)
        inward = -float(gradient @ single)
        if inward > tol * (1.0 + gnorm * float(np.linalg.norm(single))):
            return PartVerdict(index, FIRST_ORDER, inward)

    f1, f2 = field_value(sys, x, a1), field_value(sys, x, a2)
    residual = float(gradient @ (f1 + f2))
    bound = tol * (1.0 + gnorm * float(np.linalg.norm(f1)
                                       + np.linalg.norm(f2)))
    if abs(residual) > bound:
        return None
    margin = exact_decay_margin(sys, u, x, a1, a2)
    if margin > tol * (1.0 + abs(margin)):
        return PartVerdict(index, SECOND_ORDER_TAG, margin)
    return None


def _candidate_pairs(sys, parts, x, tol):
    if sys.kind == GENERAL:
        return [(c1.vector, c2.vector)
                for c1 in sys.controls for c2 in sys.controls]

    pairs = []
    for u, level in parts:
        report = classify_point(sys, u, level, x, tol)
        if report.classification == SECOND_ORDER:
            a1, a2 = report.witness_vectors()
            pairs.extend([(a1, a2), (-a1, -a2), (a2, a1)])
        if report.petrov_control is not None:
            a = report.petrov_control.vector
            pairs.append((a, a))
    directions = grids.sphere_directions(sys.m, PAIR_DIRECTIONS)
    pairs.extend((a, a) for a in directions)
    pairs.extend((a, b) for a in directions for b in directions)
    return pairs


def classify_intersection(sys, parts, x, tol=1e-9, seed=0,
                          probe_points=PROBE_POINTS,
                          probe_radius=PROBE_RADIUS):
    """
    Search a pair of controls serving every (u_i, level_i) in parts.

    Among the pairs that work the one with the largest smallest margin
    is returned.
    """
    if not parts:
        raise InputError(u'Need at least one target function')
    x = np.asarray(x, dtype=float)
    random = np.random.RandomState(seed)
    probes = [x + probe_radius * d / np.linalg.norm(d) * random.uniform()
              for d in random.normal(size=(probe_points, sys.n))]

    report = IntersectionReport(tuple(float(v) for v in x))
    if sys.kind == GENERAL:
        report.notes.append(
            u'field identity probed at %d points within %g'
            % (probe_points, probe_radius))

    best = None
    pairs = _candidate_pairs(sys, parts, x, tol)
    report.pairs_tried = len(pairs)
    for a1, a2 in pairs:
        first_order = _first_order_field(sys, x, a1, a2, probes, tol)
        verdicts = []
        for index, (u, _) in enumerate(parts):
            verdict = _part_verdict(sys, index, u, x, a1, a2,
                                    first_order, tol)
            if verdict is None:
                break
            verdicts.append(verdict)
        else:
            score = min(v.margin for v in verdicts)
            if best is None or score > best[0]:
                best = (score, (a1, a2), verdicts)

    if best is not None:
        report.found = True
        report.pair = best[1]
        report.parts = best[2]
    _log.info("Intersection of %d targets at %r: %s",
              len(parts), report.point, report.verdict)
    return report
