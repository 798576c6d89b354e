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

import csv
import math

import numpy as np
import pytest

from stla.classify import SECOND_ORDER, classify_point
from stla.errors import InputError
from stla.mintime import (
    MinTimeEstimate, SweepPlan, SweepPoint, UNREACHED, candidate_pairs,
    default_plan, exponent_sweep, hitting_time, oracle_min_time,
    parse_deltas, parse_directions, reached, write_sweep_csv)


def test_linear_crossing(example):
    system, target, point = example('ex2')
    delta = 0.01
    time = hitting_time(system, target.u, target.level, (0.0, 1 - delta),
                        (1.0,), (1.0,), 0.0, 0.5, 1e-3)
    assert time == pytest.approx(delta, rel=1e-9)

    away = hitting_time(system, target.u, target.level, (0.0, 1 - delta),
                        (-1.0,), (-1.0,), 0.0, 0.5, 1e-3)
    assert away == UNREACHED
    assert not reached(away)

    inside = hitting_time(system, target.u, target.level, (0.0, 2.0),
                          (1.0,), (1.0,), 0.0, 0.5, 1e-3)
    assert inside == 0.0

    with pytest.raises(InputError):
        hitting_time(system, target.u, target.level, (0.0, 0.5),
                     (1.0,), (1.0,), 0.3, 0.5, 1e-3)


def test_switch_inside_the_first_leg(example):
    system, target, point = example('ex2')
    # the first leg already crosses
    time = hitting_time(system, target.u, target.level, (0.0, 0.99),
                        (1.0,), (-1.0,), 0.1, 0.5, 1e-3)
    assert time == pytest.approx(0.01, rel=1e-9)
    # down for 0.05 then up: 0.05 + 0.06
    time = hitting_time(system, target.u, target.level, (0.0, 0.99),
                        (-1.0,), (1.0,), 0.05, 0.5, 1e-3)
    assert time == pytest.approx(0.11, rel=1e-9)


def test_parse_deltas():
    assert parse_deltas('1e-4:1e-2:3') == pytest.approx([1e-2, 1e-3, 1e-4])
    assert parse_deltas('0.01, 0.1,0.01') == [0.1, 0.01]
    for text in ('a:b:3', '1:0.1:3', '1e-3:1e-2:1', '-1,0.1', '0'):
        with pytest.raises(InputError):
            parse_deltas(text)


def test_parse_directions():
    out = parse_directions('normal; +y ;1,0', ['x', 'y'], gradient=(0, 2))
    assert [label for label, _ in out] == ['normal', '+y', '1,0']
    assert np.allclose(out[0][1], [0.0, 1.0])
    assert np.allclose(out[1][1], [0.0, 1.0])
    assert np.allclose(out[2][1], [1.0, 0.0])
    assert np.allclose(parse_directions('-x', ['x', 'y'])[0][1], [-1, 0])
    assert np.allclose(parse_directions('3,4', ['x', 'y'])[0][1],
                       [0.6, 0.8])

    for text, gradient in [('normal', None), ('normal', (0, 0)),
                           ('1,2,3', None), ('0,0', None), (' ; ', None),
                           ('+z', None)]:
        with pytest.raises(InputError):
            parse_directions(text, ['x', 'y'], gradient)


def test_plan_validation(example):
    system, target, point = example('ex1')
    plan = default_plan(system, point, [('+y', np.array([0.0, 1.0]))],
                        [1e-3, 1e-2], random_pairs=2)
    assert plan.deltas == [1e-2, 1e-3]
    assert len(plan.candidates) == 2
    assert plan.step_for(1e-2) == pytest.approx(1e-3)
    assert plan.step_for(1e-4) == pytest.approx(1e-4)

    def broken(**changes):
        fields = dict(plan.__dict__)
        fields.update(changes)
        return SweepPlan(**fields)

    for changes in [dict(deltas=[1e-3, 1e-2]), dict(deltas=[]),
                    dict(deltas=[1e-2, -1e-3]), dict(directions=[]),
                    dict(candidates=[]), dict(step=0.0),
                    dict(switch_times=np.array([0.3]))]:
        with pytest.raises(InputError):
            broken(**changes).validate()


def test_candidate_pairs(example, fixture_system):
    system, target, point = example('ex1')
    report = classify_point(system, target.u, target.level, point)
    pairs = candidate_pairs(system, report, random_pairs=3, seed=1)
    assert len(pairs) == 5
    assert np.allclose(pairs[0][0], [1.0]) and np.allclose(pairs[1][0], [-1.0])
    for a1, a2 in pairs[2:]:
        assert np.linalg.norm(a1) == pytest.approx(1.0)
    assert all(np.array_equal(a[0], b[0]) for a, b in
               zip(pairs, candidate_pairs(system, report, 3, seed=1)))

    system, target, point = fixture_system('rotation_general.json')
    assert len(candidate_pairs(system)) == 4


def test_oracle_rotation(example):
    system, target, point = example('ex1')
    delta = 1e-2
    plan = default_plan(system, point, [('+y', np.array([0.0, 1.0]))],
                        [delta], random_pairs=0,
                        report=classify_point(system, target.u,
                                              target.level, point))
    result = oracle_min_time(system, target.u, target.level,
                             (0.0, 1 + delta), plan)
    # a circle of radius 1 + delta meets y = 1 after acos(1/(1 + delta))
    assert result.time == pytest.approx(math.acos(1 / (1 + delta)),
                                        rel=1e-6)
    assert result.switch_time == result.time


def test_drift_pushes_past_the_disc(example):
    system, target, point = example('ex3')
    delta = 1e-3
    report = classify_point(system, target.u, target.level, point)
    plan = default_plan(system, point, [('+y', np.array([0.0, 1.0]))],
                        [delta], report, random_pairs=4, switch_times=8)
    # the bracket witness (-1, 1) and its negation lead the candidates
    assert np.allclose(plan.candidates[1][0], [1.0])
    below = oracle_min_time(system, target.u, target.level,
                            (2.0, -delta), plan)
    assert below.time <= 10 * delta
    assert below.time == pytest.approx(delta * (1 - math.sqrt(2 / 3.0)),
                                       rel=0.05)

    above = hitting_time(system, target.u, target.level, (2.0, delta),
                         (-1.0,), (-1.0,), 0.0, 0.5, 1e-5)
    assert above == pytest.approx(delta * (1 + math.sqrt(2)), rel=0.01)


def test_outward_offsets_above_the_axis_are_unreached(example):
    system, target, point = example('ex3')
    theta = 0.3
    boundary = np.array([2 * math.cos(theta), 2 * math.sin(theta)])
    plan = default_plan(system, boundary, [('normal', boundary / 2)],
                        [1e-3], random_pairs=4, switch_times=4, step=1e-2)
    for scale in (1.001, 1.01):
        result = oracle_min_time(system, target.u, target.level,
                                 boundary * scale, plan)
        # y must first be driven negative, which takes at least y0 > 0.5
        assert result.time == UNREACHED
        assert result.pair is None


def test_heisenberg_square_root_sweep(example):
    system, target, point = example('ex4')
    report = classify_point(system, target.u, target.level, point)
    directions = parse_directions('+z', system.state_vars)
    plan = default_plan(system, point, directions,
                        parse_deltas('1e-4:1e-2:4'), report, random_pairs=4)
    estimate = exponent_sweep(system, target.u, target.level, point, plan,
                              target, report, workers=1)
    assert not estimate.unreached
    assert 0.4 <= estimate.fit.exponent <= 0.6
    assert estimate.fit.r2 >= 0.95
    assert estimate.envelope_slope <= 0.05
    assert estimate.distance_fit is not None
    assert estimate.implied_constant > 0
    assert not estimate.too_many_unreached()


def test_petrov_linear_sweep(example):
    system, target, point = example('ex3')
    theta = -0.3
    center = (2 * math.cos(theta), 2 * math.sin(theta))
    report = classify_point(system, target.u, target.level, center)
    plan = default_plan(system, center,
                        parse_directions('normal', system.state_vars,
                                         report.gradient),
                        parse_deltas('1e-4:1e-2:4'), report, random_pairs=0)
    estimate = exponent_sweep(system, target.u, target.level, center, plan,
                              target, report, workers=1)
    assert 0.9 <= estimate.fit.exponent <= 1.1
    assert estimate.petrov_ratio > 0
    assert estimate.implied_constant is None


def test_sweep_center_must_be_on_the_boundary(example):
    system, target, point = example('ex1')
    plan = default_plan(system, point, [('+y', np.array([0.0, 1.0]))],
                        [1e-3], random_pairs=1)
    with pytest.raises(InputError):
        exponent_sweep(system, target.u, target.level, (0.0, 1.5), plan)


def _point(i, time):
    return SweepPoint(0, 'normal', 10.0 ** -i, (0.0,), time,
                      None, None, None)


def test_too_many_unreached():
    points = [_point(i, 0.1) for i in range(9)] + [_point(9, UNREACHED)]
    estimate = MinTimeEstimate((0.0,), 1, points, SECOND_ORDER)
    assert estimate.unreached_fraction == pytest.approx(0.1)
    assert not estimate.too_many_unreached()

    estimate.points.append(_point(10, UNREACHED))
    assert estimate.too_many_unreached()
    assert not estimate.too_many_unreached(threshold=0.5)

    estimate.classification = 'FIRST_ORDER_PETROV'
    assert not estimate.too_many_unreached()
    assert estimate.to_dict()['unreached'] == 2


def test_write_sweep_csv(example, tmpdir):
    system, target, point = example('ex1')
    report = classify_point(system, target.u, target.level, point)
    plan = default_plan(system, point, [('+y', np.array([0.0, 1.0]))],
                        [1e-2, 1e-3], report, random_pairs=0)
    estimate = exponent_sweep(system, target.u, target.level, point, plan,
                              target, report, workers=1)
    path = str(tmpdir.join('sweep.csv'))
    write_sweep_csv(estimate, path)
    with open(path) as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ['direction_id', 'delta', 'T_star', 'a1_1', 'a2_1',
                       'switch_time', 'reached']
    assert len(rows) == 3
    assert [r[-1] for r in rows[1:]] == ['1', '1']
    assert float(rows[1][1]) == 1e-2
