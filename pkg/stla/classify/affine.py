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
Second order cases for affine systems f = sigma0 + sigma a.

Every case proposes a witness pair (a1, a2); its margin is always the
exact decay margin -k(a1, a2) with

    k(a1, a2) = 4 alpha + (3 beta + gamma) . a1 + (beta + 3 gamma) . a2
                + K(a1, a2) . (a1, a2)

The cases, in the order they are tried:

 - BRACKET_DRIFT: a1 = (gamma - beta)/|gamma - beta|, a2 = -a1, so
   k = 4 alpha - 2 |gamma - beta|
 - SSTAR_NEG: S symmetric, a1 = a2 = +-v with v a minimal eigenvector of
   S*, the sign making (beta + gamma) . a1 <= 0; nonsymmetric S goes to
   S_NONSYM
 - S_NONSYM: the nonsymmetric witness of S, signed so that the linear
   part of k is <= 0
 - SINGLE_FIELD: a1 = a2 = a with a found by a grid search over the unit
   ball, polished by a pattern search
"""

import logging
from collections import namedtuple

import numpy as np

from stla.classify import grids
from stla.hamilton import exact_decay_margin
from stla.spectral import eig_symmetric, is_symmetric, nonsym_witness


_log = logging.getLogger(__name__)

BRACKET_DRIFT = u'BRACKET_DRIFT'
SSTAR_NEG = u'SSTAR_NEG'
S_NONSYM = u'S_NONSYM'
SINGLE_FIELD = u'SINGLE_FIELD'
ALPHA_RELAXED = u'ALPHA_RELAXED'

CASE_ORDER = (BRACKET_DRIFT, SSTAR_NEG, S_NONSYM, SINGLE_FIELD)
# cases whose sufficient condition assumes alpha <= 0
ALPHA_CASES = (BRACKET_DRIFT, SSTAR_NEG, S_NONSYM)


Candidate = namedtuple('Candidate', ['tag', 'a1', 'a2', 'margin'])


def single_field_margins(ad, points):
    """-k(a, a) for every row a of points."""
    drift = ad.beta + ad.gamma
    quadratic = np.einsum('ij,jk,ik->i', points, ad.S, points)
    return -4.0 * (ad.alpha + points @ drift + quadratic)


def _linear_part(ad, a1, a2):
    return float((3 * ad.beta + ad.gamma) @ a1 + (ad.beta + 3 * ad.gamma) @ a2)


def bracket_drift_pair(ad, tol):
    drift = ad.bracket_drift
    norm = float(np.linalg.norm(drift))
    if norm <= tol:
        return None
    a1 = drift / norm
    return a1, -a1


def sstar_pair(ad, tol):
    """
    a1 = a2 = v for a minimal eigenvector v of S* when S* has a negative
    eigenvalue.  Only proposed for symmetric S: a nonsymmetric S is
    handled by nonsym_pair, so no SSTAR_NEG candidate is listed for it.
    """
    if ad.S.shape[0] > 1 and not is_symmetric(ad.S):
        return None
    smat = ad.s_matrices()
    eig = eig_symmetric(smat.S_sym)
    if eig.min_eigenvalue >= -tol:
        return None
    v = eig.min_eigenvector()
    if (ad.beta + ad.gamma) @ v > 0:
        v = -v
    return v, v.copy()


def nonsym_pair(ad, tol):
    if ad.S.shape[0] < 2 or is_symmetric(ad.S):
        return None
    witness = nonsym_witness(ad.S)
    if witness is None or witness.value >= -tol:
        return None
    a1, a2 = witness.a1, witness.a2
    # K(a1, a2) is even in the pair, the linear part odd
    if _linear_part(ad, a1, a2) > 0:
        a1, a2 = -a1, -a2
    return a1, a2


def single_field_control(ad, directions=grids.DEFAULT_DIRECTIONS,
                         radii=grids.DEFAULT_RADII):
    m = ad.S.shape[0]
    points = grids.ball_points(m, directions, radii)
    values = single_field_margins(ad, points)
    start = points[int(np.argmax(values))]
    a, _ = grids.maximize_on_ball(
        lambda p: float(single_field_margins(ad, p[None, :])[0]), start)
    return a


def affine_candidates(sys, u, x, ad, tol,
                      directions=grids.DEFAULT_DIRECTIONS):
    """
    The witness pair of every applicable case, in CASE_ORDER, with its
    exact decay margin.
    """
    proposals = [
        (BRACKET_DRIFT, bracket_drift_pair(ad, tol)),
        (SSTAR_NEG, sstar_pair(ad, tol)),
        (S_NONSYM, nonsym_pair(ad, tol)),
    ]
    a = single_field_control(ad, directions)
    proposals.append((SINGLE_FIELD, (a, a.copy())))

    candidates = []
    for tag, pair in proposals:
        if pair is None:
            _log.debug("Case %s not applicable", tag)
            continue
        a1, a2 = (grids.project_to_ball(np.asarray(v, dtype=float))
                  for v in pair)
        margin = exact_decay_margin(sys, u, x, a1, a2)
        _log.debug("Case %s: margin %r", tag, margin)
        candidates.append(Candidate(tag, a1, a2, margin))
    return candidates


def implied_case(bracket_terms, tol):
    """
    Which sufficient case a transversal bracket points to, from the split
    grad u . ([sigma0, sigma a2], [sigma a1, sigma0], [sigma a1, sigma a2]).
    """
    drift_terms, control_term = bracket_terms[:2], bracket_terms[2]
    if min(drift_terms) < -tol:
        return BRACKET_DRIFT
    if control_term < -tol:
        return S_NONSYM
    return None
