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

import math

import numpy as np
import pytest

from stla.hamilton import k_matrix, s_matrix, split_matrix
from stla.spectral import (
    NonSquare, SymmetricInput, eig_symmetric, is_psd, is_symmetric,
    k_quadratic, nonsym_witness)


def test_eig_symmetric_against_numpy():
    random = np.random.RandomState(0)
    for size in (1, 2, 3, 6, 10):
        B = random.normal(size=(size, size))
        A = (B + B.T) / 2
        result = eig_symmetric(A)
        expected = np.linalg.eigh(A)[0]
        assert np.allclose(result.eigenvalues, expected, atol=1e-10)
        assert np.allclose(result.eigenvectors.T @ result.eigenvectors,
                           np.identity(size), atol=1e-12)
        assert result.residual <= 1e-10


def test_eig_symmetric_edge_cases():
    zero = eig_symmetric(np.zeros((3, 3)))
    assert np.array_equal(zero.eigenvalues, np.zeros(3))
    assert zero.sweeps == 0

    diagonal = eig_symmetric(np.diag([3.0, -1.0, 2.0]))
    assert np.allclose(diagonal.eigenvalues, [-1.0, 2.0, 3.0])
    assert diagonal.multiplicity(2.0) == 1

    with pytest.raises(NonSquare):
        eig_symmetric(np.zeros((2, 3)))


def test_ex1_eigenpair(example):
    system, target, point = example('ex1')
    K = k_matrix(s_matrix(system, target.u, point)).K
    result = eig_symmetric(K)
    assert np.allclose(result.eigenvalues, [-2.0, 0.0])
    vector = result.min_eigenvector()
    assert np.allclose(np.abs(vector), [1 / math.sqrt(2)] * 2)
    assert vector[0] * vector[1] > 0


def test_ex4_double_eigenvalue(example):
    system, target, point = example('ex4')
    K = k_matrix(s_matrix(system, target.u, point)).K
    result = eig_symmetric(K)
    assert abs(result.min_eigenvalue - (1 - math.sqrt(2))) <= 1e-10
    assert result.multiplicity(1 - math.sqrt(2)) == 2
    assert abs(result.max_eigenvalue - (1 + math.sqrt(2))) <= 1e-10


def _random_s(random, kind):
    m = random.randint(1, 6)
    B = random.normal(size=(m, m))
    if kind == 'psd':
        return B @ B.T
    if kind == 'symmetric':
        return (B + B.T) / 2
    return B


def test_k_spectrum_straddles_zero():
    """The K form vanishes on (a, -a): lambda_min <= 0 <= lambda_max."""
    random = np.random.RandomState(1)
    for _ in range(100):
        S = _random_s(random, random.choice(['psd', 'symmetric', 'any']))
        K = k_matrix(split_matrix(S)).K
        result = eig_symmetric(K)
        scale = 1e-10 * (1.0 + np.abs(K).max())
        assert result.min_eigenvalue <= scale
        assert result.max_eigenvalue >= -scale
        if is_symmetric(S):
            assert np.abs(result.eigenvalues).min() <= scale


def test_k_psd_iff_s_symmetric_psd():
    random = np.random.RandomState(2)
    mismatches = 0
    for i in range(200):
        S = _random_s(random, ['psd', 'symmetric', 'any'][i % 3])
        K = k_matrix(split_matrix(S)).K
        expected = is_symmetric(S) and is_psd(S, 1e-9).psd
        if is_psd(K, 1e-9).psd != expected:
            mismatches += 1
    assert mismatches == 0


def test_minimiser_halves_have_unit_norm():
    """Negative eigenvalues of K are reached with |a1| = |a2| = 1."""
    random = np.random.RandomState(3)
    for _ in range(50):
        S = _random_s(random, 'any')
        K = k_matrix(split_matrix(S)).K
        result = eig_symmetric(K)
        if result.min_eigenvalue >= -1e-9:
            continue
        v = result.min_eigenvector()
        m = S.shape[0]
        # swapping halves preserves the form, so the eigenspace holds
        # v + swap(v) or v - swap(v), both with equal-norm halves
        swapped = np.concatenate((v[m:], v[:m]))
        w = v + swapped
        if np.linalg.norm(w) < 0.5:
            w = v - swapped
        w = w / np.linalg.norm(w)
        a1, a2 = w[:m] * math.sqrt(2), w[m:] * math.sqrt(2)
        assert np.linalg.norm(a1) == pytest.approx(1.0)
        assert np.linalg.norm(a2) == pytest.approx(1.0)
        assert k_quadratic(S, a1, a2) == pytest.approx(
            2 * result.min_eigenvalue, abs=1e-8)


def test_nonsym_witness():
    S = np.array([[1.0, 1.0], [-1.0, 1.0]])
    a1, a2, value = nonsym_witness(S)
    assert value < 0
    assert np.linalg.norm(a1) == pytest.approx(1.0)
    assert np.linalg.norm(a2) == pytest.approx(1.0)
    assert k_quadratic(S, a1, a2) == pytest.approx(value)

    with pytest.raises(SymmetricInput):
        nonsym_witness(np.identity(2))
    with pytest.raises(NonSquare):
        nonsym_witness(np.zeros((1, 2)))


def test_nonsym_witness_is_the_most_negative_candidate():
    random = np.random.RandomState(11)
    for _ in range(20):
        S = random.normal(size=(3, 3))
        values = []
        for vector in np.linalg.eigh(S.T @ S)[1].T:
            for a1 in (vector, -vector):
                a2 = -(S @ a1) / np.linalg.norm(S @ a1)
                values.append(k_quadratic(S, a1, a2))
        witness = nonsym_witness(S)
        assert witness.value == pytest.approx(min(values), abs=1e-9)
