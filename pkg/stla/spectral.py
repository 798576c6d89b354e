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
Symmetric eigenproblems and the witness controls derived from them.

eig_symmetric is a cyclic Jacobi solver.  The matrices met here are at
most 2(m+1) x 2(m+1), where sweeping over every pair is cheap and the
eigenvectors come out orthonormal to working precision.
"""

import logging
import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from stla.errors import EvaluationError


_log = logging.getLogger(__name__)

OFF_DIAGONAL_TOL = 1e-14
MAX_SWEEPS = 100
SYMMETRIC_TOL = 1e-10
NEGATIVE_TOL = 1e-12


class NonSquare(EvaluationError):
    general_message = u'Matrix is not square.'


class SymmetricInput(EvaluationError):
    general_message = u'Matrix is symmetric; no nonsymmetric witness.'


@dataclass(frozen=True)
class EigenResult(object):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float
    sweeps: int = 0

    @property
    def min_eigenvalue(self):
        return float(self.eigenvalues[0])

    @property
    def max_eigenvalue(self):
        return float(self.eigenvalues[-1])

    def min_eigenvector(self):
        return self.eigenvectors[:, 0].copy()

    def multiplicity(self, value, tol=1e-9):
        scale = 1.0 + float(np.abs(self.eigenvalues).max())
        return int(np.sum(np.abs(self.eigenvalues - value) <= tol * scale))


PsdResult = namedtuple('PsdResult', ['psd', 'min_eigenvalue'])
Witness = namedtuple('Witness', ['a1', 'a2', 'value'])


def _off_norm(a):
    return math.sqrt(float(np.sum(a * a) - np.sum(np.diag(a) ** 2)))


def _rotate(a, v, k, l):
    """Rotate in the (k, l) plane so that a[k, l] becomes 0."""
    akl = a[k, l]
    theta = (a[l, l] - a[k, k]) / (2.0 * akl)
    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    col_k, col_l = a[:, k].copy(), a[:, l].copy()
    a[:, k] = c * col_k - s * col_l
    a[:, l] = s * col_k + c * col_l
    row_k, row_l = a[k, :].copy(), a[l, :].copy()
    a[k, :] = c * row_k - s * row_l
    a[l, :] = s * row_k + c * row_l
    a[k, l] = a[l, k] = 0.0

    vec_k, vec_l = v[:, k].copy(), v[:, l].copy()
    v[:, k] = c * vec_k - s * vec_l
    v[:, l] = s * vec_k + c * vec_l


def eig_symmetric(A):
    """
    Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
    symmetric matrix.

    The input is symmetrised first.  Sweeps run until the off diagonal
    Frobenius norm drops to 1e-14 times the norm of A.
    """
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NonSquare(u'Expected a square matrix, got shape %r'
                        % (A.shape,), shape=A.shape)
    A = (A + A.T) / 2
    n = A.shape[0]
    a = A.copy()
    v = np.identity(n)
    norm = float(np.linalg.norm(A))

    sweeps = 0
    while norm > 0 and _off_norm(a) > OFF_DIAGONAL_TOL * norm:
        if sweeps >= MAX_SWEEPS:
            _log.warning("Jacobi did not converge after %d sweeps "
                         "(off-diagonal %.3g)", sweeps, _off_norm(a))
            break
        sweeps += 1
        for k in range(n - 1):
            for l in range(k + 1, n):
                if a[k, l] != 0.0:
                    _rotate(a, v, k, l)

    values = np.diag(a).copy()
    order = np.argsort(values, kind='stable')
    values = values[order]
    vectors = v[:, order]
    residual = float(np.abs(A @ vectors - vectors * values).max()) \
        if n else 0.0
    return EigenResult(values, vectors, residual, sweeps)


def is_psd(A, tol=None):
    """
    (psd, min_eigenvalue) for symmetric A; psd is True iff
    min_eigenvalue >= -tol, tol defaulting to 1e-10 * |A|.
    """
    result = eig_symmetric(A)
    if tol is None:
        tol = 1e-10 * float(np.abs(result.eigenvalues).max()) \
            if len(result.eigenvalues) else 0.0
    lowest = result.min_eigenvalue
    return PsdResult(bool(lowest >= -tol), lowest)


def k_quadratic(S, a1, a2):
    """K(a1, a2) . (a1, a2) = S a1 . a1 + S a2 . a2 + 2 S a1 . a2"""
    S = np.asarray(S, dtype=float)
    return float(a1 @ S @ a1 + a2 @ S @ a2 + 2 * (S @ a1) @ a2)


def is_symmetric(S, tol=SYMMETRIC_TOL):
    S = np.asarray(S, dtype=float)
    skew = (S - S.T) / 2
    return float(np.linalg.norm(skew)) <= tol * float(np.linalg.norm(S))


def nonsym_witness(S):
    """
    A pair of unit controls with negative K quadratic form for a
    nonsymmetric S.

    a1 runs over the eigenvectors of S^T S with positive eigenvalue
    lambda^2 (both signs, plus normalised sums and differences within
    repeated eigenspaces); a2 = -S a1 / lambda.  The most negative pair
    over all of them is returned as (a1, a2, value).  A value that is
    not below -NEGATIVE_TOL only happens at roundoff level and is
    logged; callers compare it against their own tolerance.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise NonSquare(u'Expected a square matrix, got shape %r'
                        % (S.shape,))
    if is_symmetric(S):
        raise SymmetricInput(u'S is symmetric within tolerance')

    gram = eig_symmetric(S.T @ S)
    top = gram.max_eigenvalue
    positive = [i for i, mu in enumerate(gram.eigenvalues)
                if mu > 1e-12 * top]

    candidates = [gram.eigenvectors[:, i] for i in reversed(positive)]
    for pos, i in enumerate(positive):
        for j in positive[pos + 1:]:
            if abs(gram.eigenvalues[i] - gram.eigenvalues[j]) \
                    <= 1e-9 * top:
                vi, vj = gram.eigenvectors[:, i], gram.eigenvectors[:, j]
                candidates.append((vi + vj) / math.sqrt(2.0))
                candidates.append((vi - vj) / math.sqrt(2.0))

    best = None
    for vector in candidates:
        for sign in (1.0, -1.0):
            a1 = sign * vector
            image = S @ a1
            lam = float(np.linalg.norm(image))
            if lam == 0.0:
                continue
            a2 = -image / lam
            value = k_quadratic(S, a1, a2)
            if best is None or value < best.value:
                best = Witness(a1, a2, value)

    if best is None or best.value >= -NEGATIVE_TOL:
        _log.warning("No strictly negative nonsymmetric witness found "
                     "(best %r)", best and best.value)
    return best
