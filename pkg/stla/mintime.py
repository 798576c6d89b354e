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
A brute force minimum time oracle over single switch controls, and
sweeps fitting T(x) against the offset from a boundary point.

The oracle only ever returns the hitting time of an actual trajectory,
so its T* is an upper bound on the true minimum time.  A coarser
switch grid or a smaller candidate set can only make it larger.
"""

import csv
import logging
import math
import re
from collections import namedtuple
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from stla.classify import FIRST_ORDER_PETROV, SECOND_ORDER
from stla.errors import InputError
from stla.exprcore import compile_vector, eval_jet2
from stla.sysmodel import GENERAL, target_distance
from stla.tools.common import to_jsonable
from stla.tools.pool import ordered_map
from stla.trajsim import adjusted_step, guarded_step, rk4_step


_log = logging.getLogger(__name__)

UNREACHED = math.inf

DEFAULT_SWITCH_TIMES = 32
DEFAULT_RANDOM_PAIRS = 16
DEFAULT_HORIZON = 0.5
DEFAULT_STEP = 1e-3
# per point step is min(step, STEP_SCALE * sqrt(delta))
DEFAULT_STEP_SCALE = 0.01
MIN_SWITCH_TIME = 1e-4
CROSSING_TOL = 1e-12
UNREACHED_FRACTION = 0.1


def reached(time):
    return time != UNREACHED


OracleResult = namedtuple('OracleResult', ['time', 'pair', 'switch_time'])
ExponentFit = namedtuple('ExponentFit', ['exponent', 'constant', 'r2', 'n'])


@dataclass
class SweepPlan(object):
    center: Tuple[float, ...]
    directions: List[Tuple[str, np.ndarray]]
    deltas: List[float]
    candidates: List[Tuple[np.ndarray, np.ndarray]]
    switch_times: np.ndarray
    horizon: float = DEFAULT_HORIZON
    step: float = DEFAULT_STEP
    step_scale: float = DEFAULT_STEP_SCALE

    def validate(self):
        deltas = np.asarray(self.deltas, dtype=float)
        if not len(deltas) or np.any(deltas <= 0):
            raise InputError(u'Offsets must be positive')
        if np.any(np.diff(deltas) >= 0):
            raise InputError(u'Offsets must be strictly decreasing')
        if not self.directions:
            raise InputError(u'Need at least one sweep direction')
        if not self.candidates:
            raise InputError(u'Need at least one candidate control pair')
        if not self.step > 0 or not self.horizon > 0:
            raise InputError(u'Horizon and step must be positive')
        switch = np.asarray(self.switch_times, dtype=float)
        if len(switch) and (switch.min() < 0 or
                            2 * switch.max() > self.horizon * (1 + 1e-12)):
            raise InputError(
                u'Switch times must lie in [0, horizon/2]')
        return self

    def step_for(self, delta):
        return min(self.step, self.step_scale * math.sqrt(delta))


SweepPoint = namedtuple('SweepPoint', [
    'direction_id', 'direction', 'delta', 'point', 'time', 'pair',
    'switch_time', 'distance'])


@dataclass
class MinTimeEstimate(object):
    center: Tuple[float, ...]
    m: int
    points: List[SweepPoint] = field(default_factory=list)
    classification: Optional[str] = None
    margin: Optional[float] = None
    fit: Optional[ExponentFit] = None
    distance_fit: Optional[ExponentFit] = None
    envelope: Optional[float] = None
    envelope_slope: Optional[float] = None
    petrov_ratio: Optional[float] = None
    implied_constant: Optional[float] = None

    @property
    def unreached(self):
        return [p for p in self.points if not reached(p.time)]

    @property
    def unreached_fraction(self):
        return len(self.unreached) / float(len(self.points)) \
            if self.points else 0.0

    def too_many_unreached(self, threshold=UNREACHED_FRACTION):
        return self.classification == SECOND_ORDER \
            and self.unreached_fraction > threshold

    def to_dict(self):
        return to_jsonable({
            'center': self.center,
            'classification': self.classification,
            'margin': self.margin,
            'fit': self.fit._asdict() if self.fit else None,
            'distance_fit': self.distance_fit._asdict()
                            if self.distance_fit else None,
            'envelope': self.envelope,
            'envelope_slope': self.envelope_slope,
            'petrov_ratio': self.petrov_ratio,
            'implied_constant': self.implied_constant,
            'unreached': len(self.unreached),
            'points': len(self.points),
        })


###################
# Hitting times
###################

def _u_function(u, n):
    compiled = compile_vector([u], n)
    return lambda x: compiled(x)[0]


def _bisect(func, ufun, level, y, t, h, scale):
    """Crossing time inside the RK4 step of size h leaving (t, y)."""
    lo, hi = 0.0, h
    for _ in range(200):
        mid = (lo + hi) / 2
        gap = ufun(rk4_step(func, y, mid, t)) - level
        if abs(gap) <= CROSSING_TOL * scale:
            return t + mid
        if gap > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * (1.0 + t):
            break
    return t + hi


def _march(func, ufun, level, y, t0, steps, h, scale, states=None):
    """
    Up to steps RK4 steps from (t0, y); the first time u drops to level,
    or None.  Visited states are appended to states when given.
    """
    for i in range(steps):
        t = t0 + i * h
        y_next = guarded_step(func, y, h, t)
        if states is not None:
            states.append(y_next)
        if ufun(y_next) - level <= 0:
            return _bisect(func, ufun, level, y, t, h, scale)
        y = y_next
    return None


def hitting_time(sys, u, level, x0, a1, a2, switch_time, horizon, h):
    """
    First time the trajectory with control a1 on [0, switch_time] and a2
    afterwards enters {u <= level}, or UNREACHED within horizon.
    """
    if not horizon > 0:
        raise InputError(u'Horizon must be positive')
    if switch_time < 0 or 2 * switch_time > horizon * (1 + 1e-12):
        raise InputError(u'Switch time must lie in [0, horizon/2]')
    x0 = np.asarray(x0, dtype=float)
    ufun = _u_function(u, sys.n)
    if ufun(x0) <= level:
        return 0.0
    scale = 1.0 + abs(level)

    y = x0
    if switch_time > 0:
        h1, steps = adjusted_step(switch_time, h)
        states = [y]
        hit = _march(sys.field_function(a1), ufun, level, y, 0.0, steps,
                     h1, scale, states)
        if hit is not None:
            return hit
        y = states[-1]
    h2, steps = adjusted_step(horizon - switch_time, h)
    hit = _march(sys.field_function(a2), ufun, level, y, switch_time, steps,
                 h2, scale)
    return UNREACHED if hit is None else hit


def oracle_min_time(sys, u, level, x0, plan, h=None):
    """
    Best hitting time over plan.candidates x plan.switch_times.

    Switch times are snapped to the integration grid.  Legs are cut off
    as soon as they cannot beat the best time found so far.
    """
    h = h or plan.step
    x0 = np.asarray(x0, dtype=float)
    ufun = _u_function(u, sys.n)
    if ufun(x0) <= level:
        return OracleResult(0.0, None, 0.0)
    scale = 1.0 + abs(level)
    horizon = plan.horizon
    switch_nodes = sorted(set(
        int(round(s / h)) for s in plan.switch_times))
    max_switch = max(switch_nodes) * h if switch_nodes else 0.0

    best = OracleResult(UNREACHED, None, None)
    for a1, a2 in plan.candidates:
        pair = (np.asarray(a1, dtype=float), np.asarray(a2, dtype=float))
        f1 = sys.field_function(a1)
        f2 = sys.field_function(a2)
        same = np.array_equal(pair[0], pair[1])
        leg_end = min(horizon if same else max_switch, best.time, horizon)

        states = [x0]
        hit = _march(f1, ufun, level, x0, 0.0,
                     int(math.ceil(leg_end / h - 1e-12)), h, scale, states)
        if hit is not None and hit < best.time:
            best = OracleResult(hit, pair, hit)
        if same:
            continue

        for k in switch_nodes:
            ts = k * h
            if ts >= best.time:
                break
            if k >= len(states):
                break
            limit = min(horizon, best.time)
            steps = int(math.ceil((limit - ts) / h - 1e-12))
            hit = _march(f2, ufun, level, states[k], ts, steps, h, scale)
            if hit is not None and hit < best.time:
                best = OracleResult(hit, pair, ts)
    return best


###################
# Plans
###################

_RANGE_RE = re.compile(r'^\s*([^:]+):([^:]+):(\d+)\s*$')


def parse_deltas(text):
    """
    'LO:HI:N' (N log spaced values) or a comma separated list; always
    returned in decreasing order.
    """
    match = _RANGE_RE.match(text)
    try:
        if match:
            lo, hi, count = (float(match.group(1)), float(match.group(2)),
                             int(match.group(3)))
            if not 0 < lo < hi or count < 2:
                raise ValueError
            values = np.logspace(math.log10(lo), math.log10(hi), count)
        else:
            values = np.array([float(v) for v in text.split(',')])
    except ValueError:
        raise InputError(u'Cannot read offsets from %r (want LO:HI:N or a '
                         u'comma separated list)' % text)
    values = np.unique(values)[::-1]
    if np.any(values <= 0):
        raise InputError(u'Offsets must be positive')
    return [float(v) for v in values]


def parse_directions(text, state_vars, gradient=None):
    """
    A ';' separated list of directions: 'normal' (along grad u, out of
    the target), '+x' / '-x' for a state variable, or comma separated
    components.  Returns [(label, unit vector)].
    """
    n = len(state_vars)
    out = []
    for item in [t.strip() for t in text.split(';') if t.strip()]:
        if item == 'normal':
            if gradient is None or not np.linalg.norm(gradient) > 0:
                raise InputError(u'No normal direction: grad u vanishes')
            vector = np.asarray(gradient, dtype=float)
        elif item[0] in '+-' and item[1:] in state_vars:
            vector = np.zeros(n)
            vector[state_vars.index(item[1:])] = 1.0 if item[0] == '+' \
                else -1.0
        else:
            try:
                vector = np.array([float(v) for v in item.split(',')])
            except ValueError:
                raise InputError(u'Cannot read direction %r' % item)
            if len(vector) != n:
                raise InputError(u'Direction %r needs %d components'
                                 % (item, n))
        norm = float(np.linalg.norm(vector))
        if not norm > 0:
            raise InputError(u'Direction %r is zero' % item)
        out.append((item, vector / norm))
    if not out:
        raise InputError(u'No directions given')
    return out


def candidate_pairs(sys, report=None, random_pairs=DEFAULT_RANDOM_PAIRS,
                    seed=0):
    """
    The classifier's witness (or Petrov control, used twice), its
    negation, and seeded random unit pairs; every listed pair for
    GENERAL systems.
    """
    if sys.kind == GENERAL:
        return [(c1.vector, c2.vector)
                for c1 in sys.controls for c2 in sys.controls]
    pairs = []
    if report is not None:
        if report.classification == SECOND_ORDER:
            a1, a2 = report.witness_vectors()
            pairs.extend([(a1, a2), (-a1, -a2)])
        elif report.classification == FIRST_ORDER_PETROV:
            a = report.petrov_control.vector
            pairs.extend([(a, a), (-a, -a)])
    random = np.random.RandomState(seed)
    for _ in range(random_pairs):
        pair = random.normal(size=(2, sys.m))
        pair /= np.linalg.norm(pair, axis=1)[:, None]
        pairs.append((pair[0], pair[1]))
    return pairs


def default_plan(sys, center, directions, deltas, report=None,
                 horizon=DEFAULT_HORIZON, step=DEFAULT_STEP,
                 step_scale=DEFAULT_STEP_SCALE,
                 switch_times=DEFAULT_SWITCH_TIMES,
                 random_pairs=DEFAULT_RANDOM_PAIRS, seed=0):
    upper = horizon / 2
    lower = min(MIN_SWITCH_TIME, upper)
    switch = np.logspace(math.log10(lower), math.log10(upper), switch_times)
    plan = SweepPlan(
        tuple(float(v) for v in center), list(directions),
        sorted(deltas, reverse=True),
        candidate_pairs(sys, report, random_pairs, seed),
        switch, horizon, step, step_scale)
    return plan.validate()


###################
# Sweeps
###################

def _fit(xs, ts):
    xs, ts = np.asarray(xs, float), np.asarray(ts, float)
    keep = (xs > 0) & (ts > 0) & np.isfinite(ts)
    if keep.sum() < 2:
        return None
    lx, ly = np.log(xs[keep]), np.log(ts[keep])
    slope, intercept = np.polyfit(lx, ly, 1)
    fitted = slope * lx + intercept
    total = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum((ly - fitted) ** 2)) / total if total > 0 \
        else 1.0
    return ExponentFit(float(slope), float(math.exp(intercept)), r2,
                       int(keep.sum()))


def exponent_sweep(sys, u, level, center, plan, target=None, report=None,
                   workers=None):
    """
    Minimum times from center + delta * direction for every planned
    direction and offset, with log-log fits of T against delta (and
    against the distance to the target when it has a closed form).
    """
    center = np.asarray(center, dtype=float)
    jet = eval_jet2(u, center)
    if abs(jet.value - level) > 1e-9 * (1.0 + abs(level)):
        raise InputError(u'Sweep center is not on the target boundary '
                         u'(u - level = %.3g)' % (jet.value - level))
    plan.validate()

    items = [(i, label, vector, delta)
             for i, (label, vector) in enumerate(plan.directions)
             for delta in plan.deltas]

    def run(item):
        i, label, vector, delta = item
        point = center + delta * vector
        result = oracle_min_time(sys, u, level, point, plan,
                                 plan.step_for(delta))
        distance = target_distance(target, point) if target else None
        _log.debug("direction %s delta %.3g: T* = %r", label, delta,
                   result.time)
        return SweepPoint(i, label, delta, tuple(point), result.time,
                          result.pair, result.switch_time, distance)

    points = ordered_map(run, items, workers)
    estimate = MinTimeEstimate(tuple(float(v) for v in center), sys.m,
                               points)
    if report is not None:
        estimate.classification = report.classification
        estimate.margin = report.second_order_margin \
            if report.classification == SECOND_ORDER \
            else report.petrov_margin

    good = [p for p in points if reached(p.time) and p.time > 0]
    estimate.fit = _fit([p.delta for p in good], [p.time for p in good])
    with_distance = [p for p in good if p.distance]
    if with_distance:
        estimate.distance_fit = _fit([p.distance for p in with_distance],
                                     [p.time for p in with_distance])
    if good:
        ratios = [p.time / math.sqrt(p.delta) for p in good]
        estimate.envelope = max(ratios)
        if len(good) >= 2:
            estimate.envelope_slope = float(np.polyfit(
                np.log([p.delta for p in good]), ratios, 1)[0])
        estimate.petrov_ratio = max(
            p.time / (p.distance or p.delta) for p in good)
    if estimate.fit and estimate.classification == SECOND_ORDER:
        # T <= 2 sqrt(L/rho) delta^(1/2)  =>  L = rho C^2 / 4
        estimate.implied_constant = \
            estimate.margin * estimate.fit.constant ** 2 / 4

    if estimate.unreached:
        _log.warning("%d of %d sweep points unreached within %g",
                     len(estimate.unreached), len(points), plan.horizon)
    return estimate


def write_sweep_csv(estimate, path, digits=17):
    """Columns direction_id, delta, T_star, a1_*, a2_*, switch_time, reached."""
    fmt = u'%%.%dg' % digits
    m = estimate.m
    header = [u'direction_id', u'delta', u'T_star'] \
        + [u'a1_%d' % (j + 1) for j in range(m)] \
        + [u'a2_%d' % (j + 1) for j in range(m)] \
        + [u'switch_time', u'reached']
    with open(path, 'w', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(header)
        for p in estimate.points:
            row = [p.direction_id, fmt % p.delta, fmt % p.time]
            if p.pair is None:
                row.extend([u''] * (2 * m))
            else:
                row.extend(fmt % v for a in p.pair for v in a)
            row.append(u'' if p.switch_time is None
                       else fmt % p.switch_time)
            row.append(u'1' if reached(p.time) else u'0')
            writer.writerow(row)
    _log.info("Wrote %d sweep rows to %s", len(estimate.points), path)
