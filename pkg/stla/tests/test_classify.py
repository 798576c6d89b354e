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

from stla.classify import (
    ALPHA_RELAXED, BRACKET_DRIFT, DEGENERATE_GRADIENT, FIRST_ORDER_PETROV,
    INCONCLUSIVE, SECOND_ORDER, S_NONSYM, balanced_eigenvector,
    classify_point, petrov_margin)
from stla.exprcore import format_expr, parse
from stla.spectral import eig_symmetric
from stla.sysmodel import GENERAL, to_general
from stla.sysmodel.loader import load_system
from stla.trajsim import integrate_switched


def classify(loaded, point=None, **kwargs):
    system, target, base = loaded
    point = base if point is None else point
    return classify_point(system, target.u, target.level, point, **kwargs)


def test_ex1_rotation(example):
    report = classify(example('ex1'))
    assert report.classification == SECOND_ORDER
    assert report.petrov_margin == pytest.approx(0.0)
    assert report.second_order_margin == pytest.approx(4.0)
    assert report.eigen_margin == pytest.approx(4.0)
    a1, a2 = report.witness_vectors()
    assert np.allclose(a1, [1.0]) and np.allclose(a2, [1.0])
    assert report.attainable


def test_ex2_exterior(example):
    report = classify(example('ex2'))
    assert report.classification == SECOND_ORDER
    assert np.allclose(report.smatrices.S, [[-1.0]])
    assert report.second_order_margin == pytest.approx(4.0)


def test_ex3_bracket_drift(example):
    system, target, point = example('ex3')
    report = classify_point(system, target.u, 0.5, (1.0, 0.0))
    assert report.classification == SECOND_ORDER
    assert report.case_tag == BRACKET_DRIFT
    assert report.second_order_margin == pytest.approx(2.0)
    a1, a2 = report.witness_vectors()
    assert np.allclose(a1, [-1.0]) and np.allclose(a2, [1.0])
    single = [c for c in report.candidates if c.tag == 'SINGLE_FIELD']
    assert single[0].margin == pytest.approx(1.0, abs=1e-6)

    report = classify(example('ex3'))
    assert report.case_tag == BRACKET_DRIFT
    assert report.second_order_margin == pytest.approx(4.0)


@pytest.mark.parametrize('theta', [-0.05, -0.3, -1.0])
def test_ex3_petrov_below_the_axis(example, theta):
    system, target, point = example('ex3')
    x = (2 * math.cos(theta), 2 * math.sin(theta))
    report = classify_point(system, target.u, target.level, x)
    assert report.classification == FIRST_ORDER_PETROV
    y = x[1]
    assert report.petrov_margin == pytest.approx(abs(y) * (1 + x[0]))
    assert report.petrov_control.vector == pytest.approx(np.array([1.0]))


def test_ex3_above_the_axis_is_inconclusive(example):
    system, target, point = example('ex3')
    x = (2 * math.cos(0.3), 2 * math.sin(0.3))
    report = classify_point(system, target.u, target.level, x)
    assert report.classification == INCONCLUSIVE
    assert report.petrov_margin < 0
    assert not all(r.ok for r in report.tangency)
    assert any('not tangent' in note for note in report.notes)


def test_ex4_heisenberg(example):
    report = classify(example('ex4'))
    assert report.classification == SECOND_ORDER
    expected = 2 * (math.sqrt(2) - 1)
    assert report.eigen_margin == pytest.approx(expected)
    assert report.second_order_margin == pytest.approx(expected)
    a1, a2 = report.witness_vectors()
    assert np.linalg.norm(a1) == pytest.approx(1.0)
    assert np.linalg.norm(a2) == pytest.approx(1.0)


def test_ex5_rolling_frame(example):
    report = classify(example('ex5'))
    assert report.classification == SECOND_ORDER
    assert np.allclose(report.smatrices.S, [[1.0, 1.0], [0.0, 1.0]])
    assert report.eigen.min_eigenvalue < 0
    assert report.second_order_margin == pytest.approx(
        report.eigen_margin, rel=1e-6)


def test_ex6_nonsymmetric(example):
    report = classify(example('ex6'))
    assert report.classification == SECOND_ORDER
    assert report.case_tag == S_NONSYM
    assert report.second_order_margin == pytest.approx(2.0)
    assert report.affine.alpha == pytest.approx(0.0)
    tags = [c.tag for c in report.candidates]
    assert 'SSTAR_NEG' not in tags
    single = [c for c in report.candidates if c.tag == 'SINGLE_FIELD']
    assert single[0].margin == pytest.approx(2.0, abs=1e-6)


def test_alpha_relaxed():
    # alpha = 1/4 > 0, compensated by S = -1 and |gamma - beta| = 1
    loaded = load_system({
        'kind': 'AFFINE', 'n': 2, 'm': 1, 'state_vars': ['x', 'y'],
        'sigma0': ['1', '0'], 'sigma': [['2'], ['-x']],
        'u': 'y + x^2/8', 'base_point': [0, 0]})
    report = classify(loaded)
    assert report.classification == SECOND_ORDER
    assert report.case_tag == ALPHA_RELAXED
    assert report.affine.alpha == pytest.approx(0.25)
    assert report.second_order_margin == pytest.approx(3.0)
    assert report.notes


def test_degenerate_gradient(example):
    system, target, point = example('ex1')
    u = parse('x^2 + (y - 1)^2', system.state_vars)
    report = classify_point(system, u, 0.0, point)
    assert report.classification == DEGENERATE_GRADIENT
    assert report.witness is None


def test_positive_semidefinite_k_is_inconclusive(example):
    system, target, point = example('ex1')
    u = parse('y - 1 + x^2', system.state_vars)
    report = classify_point(system, u, 0.0, point)
    assert report.classification == INCONCLUSIVE
    assert np.allclose(report.smatrices.S, [[1.0]])
    assert report.eigen_margin == pytest.approx(0.0, abs=1e-12)
    assert 'K is positive semidefinite' in report.notes


def test_petrov_control(example):
    system, target, point = example('ex1')
    u = parse('x', system.state_vars)
    petrov = petrov_margin(system, u, point)
    assert petrov.margin == pytest.approx(1.0)
    assert petrov.control.vector == pytest.approx(np.array([1.0]))

    report = classify_point(system, u, 0.0, point)
    assert report.classification == FIRST_ORDER_PETROV
    assert report.witness is None


def test_off_boundary_point_is_noted(example):
    system, target, point = example('ex1')
    report = classify_point(system, target.u, target.level, (0.0, 1.5))
    assert any('off the target boundary' in note for note in report.notes)


def test_general_system(fixture_system):
    report = classify(fixture_system('rotation_general.json'))
    assert report.kind == GENERAL
    assert report.classification == SECOND_ORDER
    assert report.second_order_margin == pytest.approx(4.0)
    assert [c.label for c in report.witness] == ['ccw', 'ccw']
    assert len(report.candidates) == 4


def test_general_from_symmetric(example):
    system, target, point = example('ex1')
    general = to_general(system, [(1.0,), (-1.0,)])
    report = classify_point(general, target.u, target.level, point)
    assert report.classification == SECOND_ORDER
    assert report.second_order_margin == pytest.approx(4.0)


def test_balanced_eigenvector_halves(example):
    report = classify(example('ex4'))
    vector = balanced_eigenvector(report.eigen, 2, 1e-9)
    assert np.linalg.norm(vector[:2]) == pytest.approx(
        np.linalg.norm(vector[2:]))
    K = report.kmatrix.K
    assert vector @ K @ vector == pytest.approx(1 - math.sqrt(2))
    assert eig_symmetric(K).multiplicity(1 - math.sqrt(2)) == 2


def test_report_to_dict(example):
    out = classify(example('ex4')).to_dict()
    assert out['classification'] == SECOND_ORDER
    assert out['S'] == [[1.0, 1.0], [-1.0, 1.0]]
    assert len(out['K']) == 4
    assert len(out['witness']) == 2
    assert out['case_tag'] is None

    out = classify(example('ex3')).to_dict()
    assert out['affine']['alpha'] == pytest.approx(0.0)
    assert out['case_tag'] == BRACKET_DRIFT


REGISTRY = ['ex1', 'ex2', 'ex3', 'ex4', 'ex5', 'ex6']


@pytest.mark.parametrize('name', REGISTRY)
@pytest.mark.parametrize('scale', [2.0, 0.5])
def test_scaling_u_scales_the_margins(example, name, scale):
    system, target, point = example(name)
    report = classify_point(system, target.u, target.level, point)
    scaled_u = parse('%r*(%s)' % (scale, format_expr(target.u)),
                     system.state_vars)
    scaled = classify_point(system, scaled_u, scale * target.level, point)

    assert scaled.classification == report.classification
    assert scaled.case_tag == report.case_tag
    assert scaled.petrov_margin == pytest.approx(
        scale * report.petrov_margin, rel=1e-9, abs=1e-12)
    assert scaled.second_order_margin == pytest.approx(
        scale * report.second_order_margin, rel=1e-9)
    for ours, theirs in zip(scaled.witness_vectors(),
                            report.witness_vectors()):
        assert np.allclose(ours, theirs, atol=1e-6)


@pytest.mark.parametrize('name', REGISTRY)
def test_witness_enters_the_target(example, name):
    system, target, point = example(name)
    report = classify_point(system, target.u, target.level, point)
    a1, a2 = report.witness_vectors()
    record = integrate_switched(system, point, a1, a2, 0.05, 1e-3,
                                u=target.u)
    assert record.times[-1] <= 1.0
    assert min(record.u_values[1:]) < target.level
