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

from stla.exprcore import eval_jet2, parse
from stla.hamilton import (
    affine_data, affine_k_matrix, affine_k_quadratic, exact_decay_margin,
    first_hamiltonian, k_matrix, literal_pde_margin, s_matrix,
    second_hamiltonian)
from stla.spectral import k_quadratic
from stla.sysmodel import (
    AFFINE, KindMismatch, SYMMETRIC, SystemSpec, field_jacobian,
    field_value, lie_bracket)


IDENTITY_TOL = 1e-8
MONOMIALS = {
    2: ['1', 'x', 'y', 'x*y', 'x^2', 'sin(y)'],
    3: ['1', 'x', 'y', 'z', 'x*z', 'y^2', 'cos(z)'],
}


def random_expression(random, variables):
    monomials = MONOMIALS[len(variables)]
    return ' + '.join('%r*%s' % (float(c), mono) for c, mono in
                      zip(random.normal(size=len(monomials)), monomials))


def random_fixture(random, kind):
    """A random polynomial-ish system, target and point."""
    n = random.randint(2, 4)
    variables = ['x', 'y', 'z'][:min(n, 3)]
    n = len(variables)
    m = random.randint(1, 4)
    p = lambda text: parse(text, variables)
    sigma = [[p(random_expression(random, variables)) for _ in range(m)]
             for _ in range(n)]
    sigma0 = None
    if kind == AFFINE:
        sigma0 = [p(random_expression(random, variables)) for _ in range(n)]
    system = SystemSpec(kind, variables, m, sigma=sigma, sigma0=sigma0)
    u = p(random_expression(random, variables))
    x = random.uniform(-1, 1, size=n)
    return system, u, x


def random_control(random, m):
    a = random.normal(size=m)
    return 0.9 * a / np.linalg.norm(a)


def fixtures(kind, count=100, seed=0):
    random = np.random.RandomState(seed)
    for _ in range(count):
        system, u, x = random_fixture(random, kind)
        yield (system, u, x, random_control(random, system.m),
               random_control(random, system.m))


###################
# Matrices of the built-in examples
###################

def test_ex1_matrices(example):
    system, target, point = example('ex1')
    smat = s_matrix(system, target.u, point)
    assert np.allclose(smat.S, [[-1.0]])
    assert np.allclose(k_matrix(smat).K, [[-1.0, -1.0], [-1.0, -1.0]])


def test_ex2_matrix(example):
    system, target, point = example('ex2')
    assert np.allclose(s_matrix(system, target.u, point).S, [[-1.0]])


def test_ex4_matrices(example):
    system, target, point = example('ex4')
    smat = s_matrix(system, target.u, point)
    assert np.allclose(smat.S, [[1.0, 1.0], [-1.0, 1.0]])
    assert np.allclose(smat.S_sym, np.identity(2))
    assert np.allclose(smat.S_skew, [[0.0, 1.0], [-1.0, 0.0]])
    K = k_matrix(smat).K
    assert np.array_equal(K, K.T)
    assert np.allclose(K[:2, 2:], smat.S.T)


def test_ex5_matrix(example):
    system, target, point = example('ex5')
    for y in (1.0, 0.7, -0.4):
        smat = s_matrix(system, target.u, (0.0, y, 0.0))
        assert np.allclose(smat.S, [[1.0, y], [0.0, 1.0]])


def test_ex3_affine_data(example):
    system, target, point = example('ex3')
    for x in (1.0, 2.0, 3.5):
        ad = affine_data(system, target.u, (x, 0.0))
        assert ad.alpha == pytest.approx(0.0)
        assert np.allclose(ad.beta - ad.gamma, [x])
        assert np.allclose(ad.S, [[1.0]])
        assert ad.Stilde.shape == (2, 2)


def test_ex6_nonsymmetric_pattern(example):
    system, target, point = example('ex6')
    ad = affine_data(system, target.u, point)
    # at z = 0 the only coupling is the z derivative of the radial column
    assert np.allclose(ad.S, [[0.0, 1.0], [0.0, 0.0]])
    assert not np.allclose(ad.S, ad.S.T)


def test_kind_checks(example):
    system, target, point = example('ex3')
    with pytest.raises(KindMismatch):
        s_matrix(system, target.u, point)
    system, target, point = example('ex1')
    with pytest.raises(KindMismatch):
        affine_data(system, target.u, point)


###################
# Identities on random fixtures
###################

def test_bracket_identity():
    worst = 0.0
    for kind in (SYMMETRIC, AFFINE):
        for system, u, x, a1, a2 in fixtures(kind, seed=1):
            gradient = eval_jet2(u, x).gradient
            lhs = second_hamiltonian(system, u, x, a1, a2) \
                - second_hamiltonian(system, u, x, a2, a1)
            rhs = float(gradient @ lie_bracket(system, x, a1, a2))
            worst = max(worst, abs(lhs - rhs) / (1.0 + abs(rhs)))
    assert worst <= IDENTITY_TOL


def _registry_fixtures(example, count=50, seed=8):
    """Symmetric built-in systems at random points near their base."""
    random = np.random.RandomState(seed)
    for name in ('ex1', 'ex2', 'ex4', 'ex5'):
        system, target, point = example(name)
        for _ in range(count):
            x = np.asarray(point) + random.uniform(-0.5, 0.5, len(point))
            yield (system, target.u, x, random_control(random, system.m),
                   random_control(random, system.m))


def _unit(a):
    return a / np.linalg.norm(a)


def test_skew_part_is_the_bracket(example):
    """2 S_skew a1 . a2 = grad u . [sigma a1, sigma a2] for unit a1, a2."""
    worst = 0.0
    for source in (fixtures(SYMMETRIC, seed=9),
                   _registry_fixtures(example)):
        for system, u, x, a1, a2 in source:
            a1, a2 = _unit(a1), _unit(a2)
            skew = s_matrix(system, u, x).S_skew
            gradient = eval_jet2(u, x).gradient
            lhs = 2 * float((skew @ a1) @ a2)
            rhs = float(gradient @ lie_bracket(system, x, a1, a2))
            worst = max(worst, abs(lhs - rhs) / (1.0 + abs(rhs)))
    assert worst <= 1e-9


def test_symmetric_part_entrywise(example):
    """
    S* = sigma^T D^2u sigma
         + ((D sigma_j sigma_i + D sigma_i sigma_j) . grad u / 2)_ij
    """
    worst = 0.0
    for source in (fixtures(SYMMETRIC, count=50, seed=10),
                   _registry_fixtures(example, count=10)):
        for system, u, x, _, _ in source:
            m = system.m
            jet = eval_jet2(u, x)
            sigma = system.sigma_at(x)
            columns = [field_jacobian(system, x, e) for e in np.identity(m)]
            expected = sigma.T @ jet.hessian @ sigma
            for i in range(m):
                for j in range(m):
                    expected[i, j] += float(jet.gradient @ (
                        columns[j] @ sigma[:, i]
                        + columns[i] @ sigma[:, j])) / 2
            S_sym = s_matrix(system, u, x).S_sym
            scale = 1.0 + float(np.abs(expected).max())
            worst = max(worst, float(np.abs(S_sym - expected).max()) / scale)
    assert worst <= 1e-9


def test_second_hamiltonian_is_a_composition():
    """H_{g,f} u = grad(grad u . f) . g, checked by differencing."""
    worst = 0.0
    for system, u, x, a1, a2 in fixtures(SYMMETRIC, count=25, seed=2):
        g = field_value(system, x, a2)
        h = 1e-6
        plus = -first_hamiltonian(system, u, x + h * g, a1)
        minus = -first_hamiltonian(system, u, x - h * g, a1)
        numeric = (plus - minus) / (2 * h)
        exact = second_hamiltonian(system, u, x, a2, a1)
        worst = max(worst, abs(numeric - exact) / (1.0 + abs(exact)))
    assert worst <= 1e-5


def test_s_matrix_is_bilinear():
    worst = 0.0
    for system, u, x, b, c in fixtures(SYMMETRIC, seed=3):
        S = s_matrix(system, u, x).S
        worst = max(worst, abs(second_hamiltonian(system, u, x, b, c)
                               - float((S @ b) @ c)))
    assert worst <= IDENTITY_TOL


def test_symmetric_decay_margin_is_minus_k():
    worst = 0.0
    for system, u, x, a1, a2 in fixtures(SYMMETRIC, seed=4):
        smat = s_matrix(system, u, x)
        margin = exact_decay_margin(system, u, x, a1, a2)
        worst = max(worst,
                    abs(margin + k_quadratic(smat.S, a1, a2)),
                    abs(margin + k_matrix(smat).quadratic(a1, a2)))
    assert worst <= IDENTITY_TOL


def test_affine_expansion():
    worst = 0.0
    for system, u, x, a1, a2 in fixtures(AFFINE, seed=5):
        ad = affine_data(system, u, x)
        k = affine_k_quadratic(ad, a1, a2)
        extended = affine_k_matrix(ad).quadratic(
            np.concatenate(([1.0], a1)), np.concatenate(([1.0], a2)))
        margin = exact_decay_margin(system, u, x, a1, a2)
        worst = max(worst, abs(margin + k), abs(extended - k))
    assert worst <= IDENTITY_TOL


def test_affine_single_field_is_weighted_extended_form():
    """H_{f,f} u = w . S~ w with w = (1, a)."""
    worst = 0.0
    for system, u, x, a, _ in fixtures(AFFINE, seed=6):
        ad = affine_data(system, u, x)
        w = np.concatenate(([1.0], a))
        expected = ad.alpha + float((ad.beta + ad.gamma) @ a) \
            + float(a @ ad.S @ a)
        value = second_hamiltonian(system, u, x, a, a)
        worst = max(worst, abs(value - w @ ad.Stilde @ w),
                    abs(value - expected))
    assert worst <= IDENTITY_TOL


def test_literal_margin_differs_by_curvature():
    random = np.random.RandomState(7)
    system, u, x = random_fixture(random, SYMMETRIC)
    a1 = random_control(random, system.m)
    a2 = random_control(random, system.m)
    hessian = eval_jet2(u, x).hessian
    f1 = field_value(system, x, a1)
    f2 = field_value(system, x, a2)
    curvature = float(f1 @ hessian @ f1 + f2 @ hessian @ f2
                      + f1 @ hessian @ f2)
    assert literal_pde_margin(system, u, x, a1, a2) == pytest.approx(
        exact_decay_margin(system, u, x, a1, a2) + curvature, abs=1e-9)


def test_first_hamiltonian(example):
    system, target, point = example('ex3')
    x = (2 * math.cos(-0.3), 2 * math.sin(-0.3))
    # -grad u . (y, a) = -y (x + a)
    assert first_hamiltonian(system, target.u, x, (1.0,)) == pytest.approx(
        -x[1] * (x[0] + 1.0))
    jac = field_jacobian(system, x, (1.0,))
    assert np.allclose(jac, [[0.0, 1.0], [0.0, 0.0]])
