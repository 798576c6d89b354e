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

import json

import numpy as np
import pytest

from stla.errors import InputError
from stla.exprcore import eval_value, parse
from stla.sysmodel import (
    GENERAL, SYMMETRIC, InvalidControl, KindMismatch, field_jacobian,
    field_value, lie_bracket, target_distance, to_general)
from stla.sysmodel.loader import (
    SchemaError, dump_system, load_system, loads_system)
from stla.sysmodel.registry import (
    EXAMPLES, UnknownExample, get_example, list_registry, load_registry)
from stla.tests.tools import fixture_path


def test_registry_lists_six_examples():
    names = [e.name for e in list_registry()]
    assert names == ['ex1', 'ex2', 'ex3', 'ex4', 'ex5', 'ex6']
    assert list(EXAMPLES) == names

    with pytest.raises(UnknownExample):
        load_registry('ex7')


def test_ex3_radius():
    system, target, point = load_registry('ex3', radius=3.0)
    assert point == (3.0, 0.0)
    assert target.level == 4.5
    assert target.distance.radius == 3.0

    with pytest.raises(InputError):
        get_example('ex3', radius=0.5)
    with pytest.raises(InputError):
        get_example('ex1', radius=2.0)


def test_base_points_lie_on_the_boundary():
    for name in EXAMPLES:
        system, target, point = load_registry(name)
        assert eval_value(target.u, point) == target.level
        if target.distance is not None:
            assert target_distance(target, point) == pytest.approx(0.0)


def test_field_value_and_controls(example):
    system, target, point = example('ex1')
    assert system.kind == SYMMETRIC
    assert (system.n, system.m) == (2, 1)
    assert np.allclose(field_value(system, point, (1.0,)), [-1.0, 0.0])
    assert np.allclose(field_value(system, point, (-0.5,)), [0.5, 0.0])
    assert np.allclose(field_jacobian(system, point, (1.0,)),
                       [[0.0, -1.0], [1.0, 0.0]])

    with pytest.raises(InvalidControl):
        field_value(system, point, (1.5,))
    with pytest.raises(InputError):
        field_value(system, point, (1.0, 0.0))
    with pytest.raises(KindMismatch):
        system.admissible_controls()


def test_heisenberg_bracket(example):
    system, target, point = example('ex4')
    for x in [(0.0, 0.0, 1.0), (0.3, -0.2, 0.5)]:
        bracket = lie_bracket(system, x, (1.0, 0.0), (0.0, 1.0))
        assert np.allclose(bracket, [0.0, 0.0, -2.0])
        # antisymmetric
        assert np.allclose(
            lie_bracket(system, x, (0.0, 1.0), (1.0, 0.0)), -bracket)


def test_affine_field_includes_drift(example):
    system, target, point = example('ex3')
    assert np.allclose(field_value(system, (1.0, 0.5), (0.0,)), [0.5, 0.0])
    assert np.allclose(field_value(system, (1.0, 0.5), (-1.0,)),
                       [0.5, -1.0])


def test_target_rebase(example):
    system, target, point = example('ex4')
    moved = target.rebase((0.0, 0.0, 0.5))
    assert moved.level == 0.125
    assert moved.distance.radius == 0.5
    assert target_distance(moved, (0.0, 0.0, 0.75)) == pytest.approx(0.25)
    assert moved.contains((0.0, 0.1, 0.2))
    assert not moved.contains((0.0, 0.0, 0.6))


def test_distance_outside_and_cylinder(example):
    system, target, point = example('ex2')
    # exterior of the unit disc
    assert target_distance(target, (0.5, 0.0)) == pytest.approx(0.5)
    assert target_distance(target, (2.0, 0.0)) == 0.0

    system, target, point = example('ex6')
    # cylinder over (x, y)
    assert target_distance(target, (1.5, 0.0, 7.0)) == pytest.approx(0.5)


def test_to_general(example):
    system, target, point = example('ex1')
    general = to_general(system, [(1.0,), (-1.0,)])
    assert general.kind == GENERAL
    assert [c.label for c in general.admissible_controls()] == ['c0', 'c1']
    assert np.allclose(field_value(general, point, 'c0'), [-1.0, 0.0])
    assert np.allclose(field_value(general, point, (-1.0,)), [1.0, 0.0])
    assert np.allclose(field_jacobian(general, (0.2, 0.4), 'c1'),
                       field_jacobian(system, (0.2, 0.4), (-1.0,)))

    with pytest.raises(InvalidControl):
        field_value(general, point, (0.5,))
    with pytest.raises(KindMismatch):
        to_general(general, [(1.0,)])


def test_load_system_file(fixture_system):
    system, target, point = fixture_system('rotation_system.json')
    assert system.name == 'rotation'
    assert system.kind == SYMMETRIC
    assert point == (0.0, 1.0)
    assert target.level == 0.0
    assert target.distance.kind == 'halfspace'
    assert target.u == parse('y - 1', ['x', 'y'])


def test_load_general_system(fixture_system):
    system, target, point = fixture_system('rotation_general.json')
    assert system.kind == GENERAL
    assert [c.label for c in system.controls] == ['ccw', 'cw']
    assert np.allclose(field_value(system, point, 'cw'), [1.0, 0.0])


def test_malformed_json_has_line_number():
    with pytest.raises(SchemaError) as excinfo:
        load_system(fixture_path('malformed_system.json'))
    assert excinfo.value.line == 3
    assert excinfo.value.exit_code == 1


def test_bad_expression_points_at_field():
    with pytest.raises(SchemaError) as excinfo:
        load_system(fixture_path('bad_expression_system.json'))
    assert excinfo.value.field == 'sigma[1][0]'
    assert excinfo.value.line == 6


def _document(**changes):
    doc = {
        'kind': 'SYMMETRIC', 'n': 2, 'm': 1, 'state_vars': ['x', 'y'],
        'sigma': [['-y'], ['x']], 'u': 'y - 1', 'base_point': [0, 1]}
    doc.update(changes)
    return doc


def test_schema_errors():
    with pytest.raises(SchemaError) as excinfo:
        load_system(_document(colour='red'))
    assert excinfo.value.field == 'colour'

    with pytest.raises(SchemaError) as excinfo:
        load_system(_document(kind='LINEAR'))
    assert excinfo.value.field == 'kind'

    with pytest.raises(SchemaError) as excinfo:
        load_system(_document(sigma=[['-y']]))
    assert excinfo.value.field == 'sigma'

    with pytest.raises(SchemaError):
        load_system(_document(state_vars=['x', 'x']))
    with pytest.raises(SchemaError):
        load_system(_document(state_vars=['x', 'sin']))
    with pytest.raises(SchemaError):
        load_system(_document(sigma0=['1', '0']))
    with pytest.raises(SchemaError):
        load_system(_document(base_point=[0, float('inf')]))

    doc = _document()
    del doc['u']
    with pytest.raises(SchemaError) as excinfo:
        load_system(doc)
    assert excinfo.value.field == 'u'


def test_u_list_levels():
    system, target, point = load_system(
        _document(u_list=['x', {'u': 'x + y', 'level': 2}]))
    levels = [level for _, level in target.u_list]
    assert levels == [0.0, 2.0]
    assert len(target.functions()) == 3


def test_dump_and_reload(example):
    for name in EXAMPLES:
        system, target, point = example(name)
        doc = dump_system(system, target, point)
        again = loads_system(json.dumps(doc))
        assert dump_system(*again) == doc

    # a report wrapping the system is accepted too
    system, target, point = example('ex6')
    report = {'system': dump_system(system, target, point),
              'analysis': {}}
    reloaded, _, reloaded_point = load_system(report)
    assert reloaded.kind == system.kind
    assert reloaded_point == point
