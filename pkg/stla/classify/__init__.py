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
Point classification: first order (Petrov) attainability, second order
attainability with a witness pair of controls, or neither.
"""

import logging
from collections import namedtuple
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from stla.classify import affine, grids
from stla.exprcore import eval_jet2, eval_value
from stla.hamilton import (
    affine_data, exact_decay_margin, k_matrix, s_matrix)
from stla.spectral import eig_symmetric
from stla.sysmodel import (
    AFFINE, ControlPoint, GENERAL, SYMMETRIC, field_jacobian, field_value)
from stla.tools.common import to_jsonable


_log = logging.getLogger(__name__)

DEGENERATE_GRADIENT = u'DEGENERATE_GRADIENT'
FIRST_ORDER_PETROV = u'FIRST_ORDER_PETROV'
SECOND_ORDER = u'SECOND_ORDER'
INCONCLUSIVE = u'INCONCLUSIVE'
CLASSIFICATIONS = (
    DEGENERATE_GRADIENT, FIRST_ORDER_PETROV, SECOND_ORDER, INCONCLUSIVE)

# re-exported case tags
BRACKET_DRIFT = affine.BRACKET_DRIFT
SSTAR_NEG = affine.SSTAR_NEG
S_NONSYM = affine.S_NONSYM
SINGLE_FIELD = affine.SINGLE_FIELD
ALPHA_RELAXED = affine.ALPHA_RELAXED

DEFAULT_TOL = 1e-9


PetrovResult = namedtuple('PetrovResult', ['margin', 'control'])
TangencyResidual = namedtuple(
    'TangencyResidual', ['label', 'residual', 'tolerance', 'ok'])


@dataclass
class AnalysisReport(object):
    kind: str
    point: Tuple[float, ...]
    level: float
    u_value: float
    gradient: np.ndarray
    tol: float
    classification: str = INCONCLUSIVE
    petrov_margin: float = 0.0
    petrov_control: Optional[ControlPoint] = None
    tangency: List[TangencyResidual] = field(default_factory=list)
    second_order_margin: Optional[float] = None
    eigen_margin: Optional[float] = None
    witness: Optional[Tuple[ControlPoint, ControlPoint]] = None
    case_tag: Optional[str] = None
    candidates: list = field(default_factory=list)
    smatrices: object = None
    kmatrix: object = None
    affine: object = None
    eigen: object = None
    notes: List[str] = field(default_factory=list)

    @property
    def attainable(self):
        return self.classification in (FIRST_ORDER_PETROV, SECOND_ORDER)

    def witness_vectors(self):
        if self.witness is None:
            return None
        return tuple(c.vector for c in self.witness)

    def to_dict(self):
        out = {
            'kind': self.kind,
            'point': list(self.point),
            'level': self.level,
            'u_value': self.u_value,
            'gradient': self.gradient,
            'tol': self.tol,
            'classification': self.classification,
            'petrov_margin': self.petrov_margin,
            'petrov_control': _control_dict(self.petrov_control),
            'tangency': [r._asdict() for r in self.tangency],
            'second_order_margin': self.second_order_margin,
            'eigen_margin': self.eigen_margin,
            'witness': [_control_dict(c) for c in self.witness]
                       if self.witness else None,
            'case_tag': self.case_tag,
            'candidates': [
                {'tag': c.tag, 'a1': c.a1, 'a2': c.a2, 'margin': c.margin}
                for c in self.candidates],
            'notes': list(self.notes),
        }
        if self.smatrices is not None:
            out['S'] = self.smatrices.S
            out['S_sym'] = self.smatrices.S_sym
            out['S_skew'] = self.smatrices.S_skew
        if self.kmatrix is not None:
            out['K'] = self.kmatrix.K
        if self.affine is not None:
            out['affine'] = {
                'alpha': self.affine.alpha, 'beta': self.affine.beta,
                'gamma': self.affine.gamma, 'Stilde': self.affine.Stilde}
        if self.eigen is not None:
            out['eigenvalues'] = self.eigen.eigenvalues
            out['eigen_residual'] = self.eigen.residual
        return to_jsonable(out)


def _control_dict(control):
    if control is None:
        return None
    return {'value': list(control.value), 'label': control.label}


###################
# First order
###################

def petrov_margin(sys, u, x):
    """
    max over the controls of -grad u(x) . f(x, a), with a maximising
    control.

    For ball constrained kinds the maximiser is a = -w/|w| with
    w = sigma^T grad u (a = 0 when w = 0).
    """
    x = np.asarray(x, dtype=float)
    gradient = eval_jet2(u, x).gradient

    if sys.kind == GENERAL:
        best = None
        for control in sys.controls:
            value = -float(gradient @ sys.general_field_at(control.label, x))
            if best is None or value > best.margin:
                best = PetrovResult(value, control)
        return best

    w = sys.sigma_at(x).T @ gradient
    norm = float(np.linalg.norm(w))
    a = -w / norm if norm > 0 else np.zeros(sys.m)
    margin = norm
    if sys.kind == AFFINE:
        margin -= float(gradient @ sys.sigma0_at(x))
    return PetrovResult(margin, ControlPoint(tuple(float(v) for v in a)))


def _field_scale(sys, x):
    """A bound on |f(x, a)| over the controls."""
    if sys.kind == GENERAL:
        return max(float(np.linalg.norm(sys.general_field_at(c.label, x)))
                   for c in sys.controls)
    scale = float(np.linalg.norm(sys.sigma_at(x)))
    if sys.kind == AFFINE:
        scale += float(np.linalg.norm(sys.sigma0_at(x)))
    return scale


def tangency_residuals(sys, gradient, x, tol):
    """
    grad u . c for every column field c (or every listed field), each
    tested against tol (1 + |grad u| |c|).
    """
    gnorm = float(np.linalg.norm(gradient))
    columns = []
    if sys.kind == GENERAL:
        for control in sys.controls:
            columns.append((control.label,
                            sys.general_field_at(control.label, x)))
    else:
        if sys.kind == AFFINE:
            columns.append((u'sigma0', sys.sigma0_at(x)))
        sigma = sys.sigma_at(x)
        for j in range(sys.m):
            columns.append((u'sigma%d' % (j + 1), sigma[:, j]))

    out = []
    for label, column in columns:
        residual = float(gradient @ column)
        bound = tol * (1.0 + gnorm * float(np.linalg.norm(column)))
        out.append(TangencyResidual(label, residual, bound,
                                    abs(residual) <= bound))
    return out


###################
# Second order
###################

def _unit_halves(vector, m):
    a1, a2 = vector[:m].copy(), vector[m:].copy()
    n1, n2 = np.linalg.norm(a1), np.linalg.norm(a2)
    if n1 > 0:
        a1 /= n1
    if n2 > 0:
        a2 /= n2
    return a1, a2


def _canonical_sign(vector):
    nonzero = np.flatnonzero(np.abs(vector) > 1e-12)
    if len(nonzero) and vector[nonzero[0]] < 0:
        return -vector
    return vector


def balanced_eigenvector(eig, m, tol):
    """
    A vector of the minimal eigenspace of K whose two halves have equal
    norm, or the minimal eigenvector itself when the eigenspace holds no
    such vector.
    """
    lowest = eig.min_eigenvalue
    index = [i for i, value in enumerate(eig.eigenvalues)
             if abs(value - lowest) <= tol]
    basis = eig.eigenvectors[:, index]
    signs = np.concatenate((np.ones(m), -np.ones(m)))
    # c^T M c = |a1|^2 - |a2|^2 for the combination v = basis c
    M = basis.T @ (signs[:, None] * basis)
    sub = eig_symmetric(M)
    mu = sub.eigenvalues
    if np.abs(mu).min() <= 1e-12:
        c = sub.eigenvectors[:, int(np.argmin(np.abs(mu)))]
    elif mu[0] < 0 < mu[-1]:
        c = np.sqrt(mu[-1]) * sub.eigenvectors[:, 0] \
            + np.sqrt(-mu[0]) * sub.eigenvectors[:, -1]
    else:
        _log.warning("Minimal eigenspace of K has no balanced vector")
        return _canonical_sign(eig.min_eigenvector())
    vector = basis @ c
    return _canonical_sign(vector / np.linalg.norm(vector))


def _classify_symmetric(sys, u, x, report, tol):
    smat = s_matrix(sys, u, x)
    kmat = k_matrix(smat)
    eig = eig_symmetric(kmat.K)
    report.smatrices, report.kmatrix, report.eigen = smat, kmat, eig
    second_tol = tol * (1.0 + float(np.linalg.norm(kmat.K)))
    report.eigen_margin = -2.0 * eig.min_eigenvalue

    if eig.min_eigenvalue >= -second_tol:
        report.notes.append(u'K is positive semidefinite')
        return

    vector = balanced_eigenvector(eig, sys.m, second_tol)
    a1, a2 = _unit_halves(vector, sys.m)
    margin = exact_decay_margin(sys, u, x, a1, a2)
    _log.debug("Symmetric witness %r, %r: margin %r (eigen margin %r)",
               a1, a2, margin, report.eigen_margin)
    if margin > second_tol:
        report.classification = SECOND_ORDER
        report.second_order_margin = margin
        report.witness = (sys.control(a1), sys.control(a2))
    else:
        report.notes.append(
            u'negative eigenvalue but no unit witness pair found')


def _classify_affine(sys, u, x, report, tol, directions):
    ad = affine_data(sys, u, x)
    report.affine = ad
    report.smatrices = ad.s_matrices(x)
    second_tol = tol * (1.0 + float(np.linalg.norm(ad.Stilde)))

    candidates = affine.affine_candidates(sys, u, x, ad, second_tol,
                                          directions)
    report.candidates = candidates
    best = None
    for candidate in candidates:
        if candidate.margin <= second_tol:
            continue
        if best is None or candidate.margin > best.margin + second_tol:
            best = candidate
    if best is None:
        return

    report.classification = SECOND_ORDER
    report.second_order_margin = best.margin
    report.witness = (sys.control(best.a1), sys.control(best.a2))
    report.case_tag = best.tag
    if ad.alpha > second_tol and best.tag in affine.ALPHA_CASES:
        report.case_tag = ALPHA_RELAXED
        report.notes.append(
            u'%s compensates alpha = %.12g > 0' % (best.tag, ad.alpha))


def _classify_general(sys, u, x, report, tol):
    jet = eval_jet2(u, x)
    gnorm = float(np.linalg.norm(jet.gradient))
    values = dict((c.label, field_value(sys, x, c)) for c in sys.controls)
    jacobians = dict((c.label, field_jacobian(sys, x, c))
                     for c in sys.controls)
    fmax = max(float(np.linalg.norm(v)) for v in values.values())
    jmax = max(float(np.linalg.norm(j)) for j in jacobians.values())
    second_tol = tol * (1.0 + float(np.linalg.norm(jet.hessian)) * fmax ** 2
                        + gnorm * jmax * fmax)

    best = None
    for c1 in sys.controls:
        for c2 in sys.controls:
            f1, f2 = values[c1.label], values[c2.label]
            residual = float(jet.gradient @ (f1 + f2))
            bound = tol * (1.0 + gnorm * float(
                np.linalg.norm(f1) + np.linalg.norm(f2)))
            if abs(residual) > bound:
                continue
            margin = exact_decay_margin(sys, u, x, c1, c2)
            report.candidates.append(
                affine.Candidate(u'PAIR', c1.vector, c2.vector, margin))
            if margin > second_tol and (best is None or margin > best[0]):
                best = (margin, c1, c2)

    if best is not None:
        report.classification = SECOND_ORDER
        report.second_order_margin = best[0]
        report.witness = (best[1], best[2])


def classify_point(sys, u, level, x, tol=DEFAULT_TOL,
                   directions=grids.DEFAULT_DIRECTIONS):
    """
    Classify the target {u <= level} at the point x.

    Returns an AnalysisReport whose classification is one of
    DEGENERATE_GRADIENT, FIRST_ORDER_PETROV, SECOND_ORDER or
    INCONCLUSIVE.  directions sets the size of the single field search
    grid for affine systems.
    """
    x = np.asarray(x, dtype=float)
    jet = eval_jet2(u, x)
    gradient = jet.gradient
    report = AnalysisReport(
        kind=sys.kind, point=tuple(float(v) for v in x),
        level=float(level), u_value=eval_value(u, x),
        gradient=gradient, tol=tol)

    gnorm = float(np.linalg.norm(gradient))
    if gnorm <= tol:
        report.classification = DEGENERATE_GRADIENT
        return report

    boundary = abs(report.u_value - level)
    if boundary > tol * (1.0 + abs(level)):
        report.notes.append(
            u'point is off the target boundary by %.3g' % boundary)

    petrov = petrov_margin(sys, u, x)
    report.petrov_margin, report.petrov_control = petrov
    first_tol = tol * (1.0 + gnorm * _field_scale(sys, x))
    if petrov.margin > first_tol:
        report.classification = FIRST_ORDER_PETROV
        return report

    report.tangency = tangency_residuals(sys, gradient, x, tol)
    if sys.kind != GENERAL and not all(r.ok for r in report.tangency):
        report.notes.append(
            u'fields are not tangent and none points inward')
        return report

    if sys.kind == SYMMETRIC:
        _classify_symmetric(sys, u, x, report, tol)
    elif sys.kind == AFFINE:
        _classify_affine(sys, u, x, report, tol, directions)
    else:
        _classify_general(sys, u, x, report, tol)

    _log.info("Point %r classified %s", report.point, report.classification)
    return report
