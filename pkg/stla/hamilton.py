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
First and second order Hamiltonians of a target function along the
fields of a system, and the matrices built from them.

Conventions used throughout:

 - H_f u = -grad u . f
 - H_{g,f} u = grad(grad u . f) . g = D2u f . g + grad u . Df g
   (g is the "outer" field, f the "inner" one)
 - S_ij = H_{sigma_j, sigma_i} u, so H_{sigma b, sigma c} u = (S b) . c
 - K = [[S*, S^T], [S, S*]] with S* the symmetric part of S
 - for affine systems the extended matrix is
   S~ = [[alpha, beta^T], [gamma, S]] with beta_j = H_{sigma_j, sigma0} u
   and gamma_j = H_{sigma0, sigma_j} u
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from stla.errors import EvaluationError
from stla.exprcore import eval_jet2
from stla.sysmodel import (
    AFFINE, KindMismatch, SYMMETRIC, field_jacobian, field_value)


_log = logging.getLogger(__name__)

# gamma - beta must match the bracket against grad u this closely
# (relative to the size of the terms involved)
BRACKET_CHECK_TOL = 1e-9


class IdentityViolated(EvaluationError):
    general_message = u'Internal consistency check failed.'


@dataclass(frozen=True)
class SMatrices(object):
    S: np.ndarray
    S_sym: np.ndarray
    S_skew: np.ndarray
    at_point: Tuple[float, ...]


@dataclass(frozen=True)
class KMatrix(object):
    K: np.ndarray

    @property
    def m(self):
        return self.K.shape[0] // 2

    def quadratic(self, a1, a2):
        v = np.concatenate((np.asarray(a1, float), np.asarray(a2, float)))
        return float(v @ self.K @ v)


@dataclass(frozen=True)
class AffineData(object):
    alpha: float
    beta: np.ndarray
    gamma: np.ndarray
    S: np.ndarray
    Stilde: np.ndarray

    @property
    def bracket_drift(self):
        """gamma - beta, i.e. ([sigma0, sigma_j] . grad u)_j"""
        return self.gamma - self.beta

    def s_matrices(self, at_point=()):
        return split_matrix(self.S, at_point)


def _point(x):
    return np.asarray(x, dtype=float)


def first_hamiltonian(sys, u, x, a):
    """-grad u(x) . f(x, a)"""
    x = _point(x)
    return -float(eval_jet2(u, x).gradient @ field_value(sys, x, a))


def second_hamiltonian(sys, u, x, a_outer, a_inner):
    """
    H_{g,f} u(x) with g = f(., a_outer) and f = f(., a_inner).
    """
    x = _point(x)
    jet = eval_jet2(u, x)
    f = field_value(sys, x, a_inner)
    g = field_value(sys, x, a_outer)
    return float((jet.hessian @ f) @ g
                 + jet.gradient @ (field_jacobian(sys, x, a_inner) @ g))


def _extended_matrix(sys, u, x):
    """
    H_{c_j, c_i} u for the column fields c_0 = sigma0 (or 0),
    c_1..c_m = sigma_1..sigma_m, together with the column data.
    """
    jet = eval_jet2(u, x)
    values, jacobians = sys.column_jets(x)
    curvature = values @ jet.hessian @ values.T
    # transport[i, j] = grad u . (D c_i) c_j
    transport = np.einsum('k,ikl,jl->ij', jet.gradient, jacobians, values)
    return curvature + transport, jet, values, jacobians


def split_matrix(S, at_point=()):
    S = np.array(S, dtype=float)
    return SMatrices(S, (S + S.T) / 2, (S - S.T) / 2,
                     tuple(float(v) for v in at_point))


def s_matrix(sys, u, x):
    """The m x m matrix S(x) with its symmetric and skew parts."""
    if sys.kind != SYMMETRIC:
        raise KindMismatch(u's_matrix needs a SYMMETRIC system, got %s'
                           % sys.kind)
    x = _point(x)
    extended, _, _, _ = _extended_matrix(sys, u, x)
    return split_matrix(extended[1:, 1:], x)


def k_matrix(smat):
    """K = [[S*, S^T], [S, S*]]"""
    S, S_sym = smat.S, smat.S_sym
    K = np.block([[S_sym, S.T], [S, S_sym]])
    assert np.array_equal(K, K.T), "K must be symmetric"
    return KMatrix(K)


def affine_data(sys, u, x):
    """
    alpha, beta, gamma, S and S~ of an affine system at x.

    Raises IdentityViolated if gamma - beta does not reproduce the
    brackets [sigma0, sigma_j] against grad u.
    """
    if sys.kind != AFFINE:
        raise KindMismatch(u'affine_data needs an AFFINE system, got %s'
                           % sys.kind)
    x = _point(x)
    extended, jet, values, jacobians = _extended_matrix(sys, u, x)
    alpha = float(extended[0, 0])
    beta = extended[0, 1:].copy()
    gamma = extended[1:, 0].copy()
    data = AffineData(alpha, beta, gamma, extended[1:, 1:].copy(),
                      extended)

    # [sigma0, sigma_j] = D sigma_j sigma0 - D sigma0 sigma_j
    brackets = np.array([
        jacobians[j] @ values[0] - jacobians[0] @ values[j]
        for j in range(1, sys.m + 1)]).reshape(sys.m, sys.n)
    expected = brackets @ jet.gradient
    scale = 1.0 + np.abs(extended[0, :]).max() + np.abs(extended[:, 0]).max()
    error = np.abs(data.bracket_drift - expected).max() if sys.m else 0.0
    if error > BRACKET_CHECK_TOL * scale:
        raise IdentityViolated(
            u'gamma - beta differs from the drift brackets by %.3g' % error,
            point=tuple(x))
    return data


def affine_k_quadratic(ad, a1, a2):
    """
    k(a1, a2) = 4 alpha + (3 beta + gamma) . a1 + (beta + 3 gamma) . a2
                + K(a1, a2) . (a1, a2)

    twice the coefficient of t^2 in u(x_2t) - u(x) along the switched
    trajectory of an affine system.
    """
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    K = k_matrix(split_matrix(ad.S))
    return float(4 * ad.alpha
                 + (3 * ad.beta + ad.gamma) @ a1
                 + (ad.beta + 3 * ad.gamma) @ a2
                 + K.quadratic(a1, a2))


def affine_k_matrix(ad):
    """
    K~ built from S~ the same way K is built from S.  Its quadratic form
    at (1, a1, 1, a2) is affine_k_quadratic(ad, a1, a2).
    """
    return k_matrix(split_matrix(ad.Stilde))


def exact_decay_margin(sys, u, x, a1, a2):
    """
    -(H_{f,f} u + H_{g,g} u + 2 H_{f,g} u)(x) with f = f(., a1),
    g = f(., a2): minus twice the t^2 coefficient of u along the
    switched trajectory.  Positive means u decreases at second order.
    """
    H_ff = second_hamiltonian(sys, u, x, a1, a1)
    H_gg = second_hamiltonian(sys, u, x, a2, a2)
    H_fg = second_hamiltonian(sys, u, x, a1, a2)
    return -(H_ff + H_gg + 2 * H_fg)


def literal_pde_margin(sys, u, x, a1, a2):
    """
    -D2u f1 . f2 - (D(f1 + f2)(f1 + f2) + [f1, f2]) . grad u

    The bracketed second order expression written out term by term.  It
    differs from exact_decay_margin by the curvature terms
    D2u f1 . f1 + D2u f2 . f2 + D2u f1 . f2; kept for comparison only.
    """
    x = _point(x)
    jet = eval_jet2(u, x)
    f1 = field_value(sys, x, a1)
    f2 = field_value(sys, x, a2)
    J1 = field_jacobian(sys, x, a1)
    J2 = field_jacobian(sys, x, a2)
    total = f1 + f2
    bracket = J2 @ f1 - J1 @ f2
    return float(-(jet.hessian @ f1) @ f2
                 - ((J1 + J2) @ total + bracket) @ jet.gradient)
