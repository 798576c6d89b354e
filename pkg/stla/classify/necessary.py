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
Necessary conditions for a square root estimate of the minimum time at
a tangency point: some bracket of two fields is transversal to the
target, or some single field bends into it.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from stla.classify import affine, grids, tangency_residuals
from stla.exprcore import eval_jet2
from stla.hamilton import affine_data, s_matrix, second_hamiltonian
from stla.spectral import eig_symmetric
from stla.sysmodel import AFFINE, GENERAL, SYMMETRIC, lie_bracket
from stla.tools.common import to_jsonable


_log = logging.getLogger(__name__)

NECESSARY_HOLDS = u'NECESSARY_HOLDS'
NECESSARY_FAILS = u'NECESSARY_FAILS'

DEFAULT_PAIR_DIRECTIONS = 64
POLISH_ITERATIONS = 20


@dataclass
class NecessaryReport(object):
    bracket_transversal: bool = False
    bracket_value: Optional[float] = None
    bracket_pair: Optional[tuple] = None
    single_field_negative: bool = False
    single_field_value: Optional[float] = None
    single_field_control: Optional[np.ndarray] = None
    implied_case: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    @property
    def verdict(self):
        if self.bracket_transversal or self.single_field_negative:
            return NECESSARY_HOLDS
        return NECESSARY_FAILS

    def to_dict(self):
        return to_jsonable({
            'bracket_transversal': self.bracket_transversal,
            'bracket_value': self.bracket_value,
            'bracket_pair': self.bracket_pair,
            'single_field_negative': self.single_field_negative,
            'single_field_value': self.single_field_value,
            'single_field_control': self.single_field_control,
            'implied_case': self.implied_case,
            'verdict': self.verdict,
            'notes': self.notes,
        })


def bracket_form(sys, u, x):
    """
    B[i, j] = grad u . [c_i, c_j] for the column fields c_0 = sigma0
    (zero for symmetric systems), c_1..c_m.
    """
    gradient = eval_jet2(u, x).gradient
    values, jacobians = sys.column_jets(x)
    # T[i, j] = grad u . (D c_i) c_j
    transport = np.einsum('k,ikl,jl->ij', gradient, jacobians, values)
    return transport.T - transport


def _weights(sys, a):
    drift = 1.0 if sys.kind == AFFINE else 0.0
    return np.concatenate(([drift], a))


def _polish_bracket(sys, B, a1, a2):
    """Alternating exact minimisation of w1^T B w2, linear in each a."""
    for _ in range(POLISH_ITERATIONS):
        row = (B @ _weights(sys, a2))[1:]
        if np.linalg.norm(row) > 0:
            a1 = -row / np.linalg.norm(row)
        col = (_weights(sys, a1) @ B)[1:]
        if np.linalg.norm(col) > 0:
            a2 = -col / np.linalg.norm(col)
    return a1, a2


def _bracket_check(sys, u, x, tol, directions, report):
    if sys.kind == GENERAL:
        gradient = eval_jet2(u, x).gradient
        best = None
        for c1 in sys.controls:
            for c2 in sys.controls:
                value = float(gradient @ lie_bracket(sys, x, c1, c2))
                if best is None or value < best[0]:
                    best = (value, c1.vector, c2.vector)
        value, a1, a2 = best
    else:
        B = bracket_form(sys, u, x)
        points = grids.sphere_directions(sys.m, directions)
        if sys.kind == AFFINE:
            points = np.vstack((points, np.zeros((1, sys.m))))
        W = np.array([_weights(sys, a) for a in points])
        table = W @ B @ W.T
        i, j = np.unravel_index(int(np.argmin(table)), table.shape)
        a1, a2 = _polish_bracket(sys, B, points[i].copy(), points[j].copy())
        value = float(_weights(sys, a1) @ B @ _weights(sys, a2))
        if value > table[i, j]:
            a1, a2, value = points[i], points[j], float(table[i, j])
        if sys.kind == AFFINE and value < -tol:
            terms = (float(B[0, 1:] @ a2), float(a1 @ B[1:, 0]),
                     float(a1 @ B[1:, 1:] @ a2))
            report.implied_case = affine.implied_case(terms, tol)

    report.bracket_value = value
    report.bracket_pair = (a1, a2)
    report.bracket_transversal = value < -tol


def _single_field_check(sys, u, x, tol, directions, report):
    if sys.kind == GENERAL:
        best = None
        for control in sys.controls:
            value = second_hamiltonian(sys, u, x, control, control)
            if best is None or value < best[0]:
                best = (value, control.vector)
        value, a = best
    elif sys.kind == SYMMETRIC:
        # min over the sphere of a . S a is the lowest eigenvalue of S*
        smat = s_matrix(sys, u, x)
        eig = eig_symmetric(smat.S_sym)
        a = eig.min_eigenvector()
        value = second_hamiltonian(sys, u, x, a, a)
    else:
        ad = affine_data(sys, u, x)
        # -k(a, a)/4 = -(alpha + (beta + gamma) . a + a . S a)
        a = affine.single_field_control(ad, directions)
        value = second_hamiltonian(sys, u, x, a, a)

    report.single_field_value = value
    report.single_field_control = a
    report.single_field_negative = value < -tol


def check_necessary(sys, u, x, tol=1e-9,
                    directions=DEFAULT_PAIR_DIRECTIONS):
    """
    Evaluate both necessary conditions at x.

    The tangency hypothesis (grad u . f(x, a) = 0 for every a) is
    checked and a note is added when it fails; the conditions are still
    evaluated.
    """
    x = np.asarray(x, dtype=float)
    report = NecessaryReport()
    gradient = eval_jet2(u, x).gradient
    if not np.linalg.norm(gradient) > tol:
        report.notes.append(u'precondition: gradient of u vanishes')
    elif not all(r.ok for r in tangency_residuals(sys, gradient, x, tol)):
        report.notes.append(
            u'precondition: fields are not all tangent to the target')
    if sys.kind == GENERAL:
        report.notes.append(
            u'hypotheses unchecked: convexity of f(x, .) is assumed')

    scale = 1.0 + float(np.linalg.norm(gradient))
    _bracket_check(sys, u, x, tol * scale, directions, report)
    _single_field_check(sys, u, x, tol * scale, directions, report)

    if sys.kind == AFFINE:
        alpha = affine_data(sys, u, x).alpha
        if report.single_field_negative:
            report.implied_case = affine.SINGLE_FIELD
        if alpha > tol * scale:
            report.notes.append(
                u'alpha = %.12g > 0: the necessary conditions need not '
                u'imply a sufficient case' % alpha)
            report.implied_case = None
    else:
        report.implied_case = None

    _log.info("Necessary conditions at %r: %s", tuple(x), report.verdict)
    return report
