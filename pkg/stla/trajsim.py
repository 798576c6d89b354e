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
Single switch trajectories and the second order expansions they obey.

A switched trajectory follows f(., a1) on [0, t] and f(., a2) on
[t, 2t].  Both legs are integrated with classical fixed step RK4 on a
shared grid, so the switch lands exactly on a node.

Expansions checked here:

    x_2t = x0 + (f + g) t + (D(f + g)(f + g) + [f, g]) t^2/2 + O(t^3)
    u(x_2t) = u(x0) + grad u . (f + g) t - margin t^2/2 + O(t^3)

with margin the exact decay margin of the pair.
"""

import csv
import logging
import math
from collections import namedtuple
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from stla.classify.grids import sphere_directions
from stla.errors import EvaluationError, InputError
from stla.exprcore import DomainError, eval_jet2, eval_value
from stla.hamilton import exact_decay_margin
from stla.sysmodel import (
    ControlPoint, GENERAL, field_jacobian, field_value, lie_bracket)
from stla.tools.pool import ordered_map


_log = logging.getLogger(__name__)

# states beyond this norm count as a blow-up
DIVERGENCE_NORM = 1e100
# residuals below this are roundoff
RESIDUAL_FLOOR = 1e-13
DEFAULT_EXPONENTS = tuple(range(4, 11))
DEFAULT_STEP_DIVISOR = 1000


class IntegrationDiverged(EvaluationError):
    general_message = u'Trajectory blew up.'
    exit_code = 5

    def __init__(self, message=None, last_state=None, time=None):
        EvaluationError.__init__(
            self, message, last_state=last_state, time=time)
        self.last_state = last_state
        self.time = time


class DegenerateFit(EvaluationError):
    general_message = u'Not enough usable points for a fit.'


@dataclass
class TrajectoryRecord(object):
    times: np.ndarray
    states: np.ndarray
    switch_index: int
    controls: Tuple[ControlPoint, ControlPoint]
    u_values: Optional[np.ndarray] = None

    @property
    def endpoint(self):
        return self.states[-1]

    @property
    def step(self):
        return float(self.times[1] - self.times[0])

    def control_at(self, index):
        """The control in force on the step leaving node index."""
        return self.controls[0 if index < self.switch_index else 1]


OrderFit = namedtuple('OrderFit', ['slope', 'intercept', 'r2', 'excluded'])
TaylorReport = namedtuple('TaylorReport', [
    'ts', 'state_residuals', 'value_residuals', 'state_fit', 'value_fit'])
Localization = namedtuple('Localization', ['bound', 'time'])


###################
# Integration
###################

def adjusted_step(t, h):
    """(h', steps) with h' <= h and steps * h' = t."""
    if not t > 0:
        raise InputError(u'Leg time must be positive, got %r' % t)
    if not h > 0:
        raise InputError(u'Step must be positive, got %r' % h)
    steps = max(1, int(math.ceil(t / h - 1e-12)))
    return t / steps, steps


def _checked(y, time):
    if not np.all(np.isfinite(y)) or np.linalg.norm(y) > DIVERGENCE_NORM:
        raise IntegrationDiverged(
            u'State left the finite range at t = %.6g' % time, time=time)
    return y


def rk4_step(func, y, h, time=0.0):
    """One classical RK4 step of size h from y."""
    k1 = np.asarray(func(y))
    k2 = np.asarray(func(_checked(y + h / 2 * k1, time)))
    k3 = np.asarray(func(_checked(y + h / 2 * k2, time)))
    k4 = np.asarray(func(_checked(y + h * k3, time)))
    return _checked(y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4), time + h)


def guarded_step(func, y, h, time=0.0):
    """
    rk4_step, turning blow-ups into IntegrationDiverged carrying the last
    finite state.
    """
    try:
        return rk4_step(func, y, h, time)
    except IntegrationDiverged as exc:
        exc.last_state = tuple(float(v) for v in y)
        exc.metadata['last_state'] = exc.last_state
        raise
    except DomainError as exc:
        if 'overflow' not in exc.reason:
            raise
        raise IntegrationDiverged(
            u'Field overflowed at t = %.6g: %s' % (time, exc),
            last_state=tuple(float(v) for v in y), time=time)


def rk4_leg(func, x, h, steps, t0=0.0):
    """
    steps RK4 steps of size h from x; returns the array of the
    steps + 1 visited states.
    """
    states = np.empty((steps + 1, len(x)))
    states[0] = x
    y = np.array(x, dtype=float)
    for i in range(steps):
        y = guarded_step(func, y, h, t0 + i * h)
        states[i + 1] = y
    return states


def integrate_switched(sys, x0, a1, a2, t, h, u=None):
    """
    RK4 along f(., a1) on [0, t] then f(., a2) on [t, 2t].

    h is lowered to t/ceil(t/h) so the switch time is a grid node.
    When u is given its values along the trajectory are recorded.
    """
    h, steps = adjusted_step(t, h)
    c1, c2 = sys.control(a1), sys.control(a2)
    x0 = np.asarray(x0, dtype=float)

    first = rk4_leg(sys.field_function(c1), x0, h, steps)
    second = rk4_leg(sys.field_function(c2), first[-1], h, steps, t)
    states = np.vstack((first, second[1:]))
    times = np.arange(2 * steps + 1) * h
    times[steps] = t
    times[-1] = 2 * t

    record = TrajectoryRecord(times, states, steps, (c1, c2))
    if u is not None:
        record.u_values = np.array([eval_value(u, s) for s in states])
    return record


###################
# Expansions
###################

def predicted_endpoint(sys, x0, a1, a2, t):
    """x0 + (f + g) t + (D(f + g)(f + g) + [f, g]) t^2/2 at x0."""
    x0 = np.asarray(x0, dtype=float)
    total = field_value(sys, x0, a1) + field_value(sys, x0, a2)
    jacobian = field_jacobian(sys, x0, a1) + field_jacobian(sys, x0, a2)
    bracket = lie_bracket(sys, x0, a1, a2)
    return x0 + total * t + (jacobian @ total + bracket) * t * t / 2


def taylor_residual_state(sys, x0, a1, a2, t, h, record=None):
    if record is None:
        record = integrate_switched(sys, x0, a1, a2, t, h)
    predicted = predicted_endpoint(sys, x0, a1, a2, t)
    return float(np.linalg.norm(record.endpoint - predicted))


def taylor_residual_value(sys, u, x0, a1, a2, t, h, record=None):
    """
    |u(x_2t) - u(x0) - grad u . (f + g) t + margin t^2/2|
    """
    if record is None:
        record = integrate_switched(sys, x0, a1, a2, t, h)
    x0 = np.asarray(x0, dtype=float)
    jet = eval_jet2(u, x0)
    total = field_value(sys, x0, a1) + field_value(sys, x0, a2)
    margin = exact_decay_margin(sys, u, x0, a1, a2)
    predicted = jet.value + float(jet.gradient @ total) * t \
        - margin * t * t / 2
    return abs(eval_value(u, record.endpoint) - predicted)


def order_fit(ts, residuals, floor=RESIDUAL_FLOOR):
    """
    Least squares line through (log t, log residual).

    Residuals at or below floor are dropped and counted in excluded;
    DegenerateFit when fewer than two points remain.
    """
    ts = np.asarray(ts, dtype=float)
    residuals = np.asarray(residuals, dtype=float)
    if len(ts) != len(residuals) or len(ts) < 4:
        raise InputError(u'order_fit needs at least 4 (t, residual) pairs')
    if np.any(ts <= 0) or np.any(residuals < 0):
        raise InputError(u'order_fit needs positive t and residuals')

    keep = residuals > floor
    excluded = int(np.sum(~keep))
    if keep.sum() < 2:
        raise DegenerateFit(
            u'%d of %d residuals are below %g' % (excluded, len(ts), floor),
            excluded=excluded)
    if excluded:
        _log.warning("Excluding %d residuals below %g from the fit",
                     excluded, floor)

    lx, ly = np.log(ts[keep]), np.log(residuals[keep])
    slope, intercept = np.polyfit(lx, ly, 1)
    fitted = slope * lx + intercept
    total = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum((ly - fitted) ** 2)) / total if total > 0 \
        else 1.0
    return OrderFit(float(slope), float(intercept), r2, excluded)


def _fit_or_exact(ts, residuals, floor):
    try:
        return order_fit(ts, residuals, floor)
    except DegenerateFit:
        _log.info("Expansion exact up to roundoff")
        return None


def taylor_order_report(sys, u, x0, a1, a2, exponents=DEFAULT_EXPONENTS,
                        divisor=DEFAULT_STEP_DIVISOR, floor=RESIDUAL_FLOOR,
                        workers=None):
    """
    Both residuals over t = 2^-k, k in exponents, each integrated with
    step t/divisor, and their order fits.  A fit of None means the
    expansion is exact up to roundoff.
    """
    ts = [2.0 ** -k for k in exponents]

    def residuals(t):
        record = integrate_switched(sys, x0, a1, a2, t, t / divisor)
        return (taylor_residual_state(sys, x0, a1, a2, t, None, record),
                taylor_residual_value(sys, u, x0, a1, a2, t, None, record))

    pairs = ordered_map(residuals, ts, workers)
    state = [p[0] for p in pairs]
    value = [p[1] for p in pairs]
    return TaylorReport(ts, state, value, _fit_or_exact(ts, state, floor),
                        _fit_or_exact(ts, value, floor))


def bracket_deflection(sys, x0, a1, a2, t, h):
    """
    |x_2t - y_2t - [f, g](x0) t^2/2| with y following the averaged field
    (f + g)/2 for time 2t.  O(t^3).
    """
    record = integrate_switched(sys, x0, a1, a2, t, h)
    h, steps = adjusted_step(t, h)
    f1 = sys.field_function(a1)
    f2 = sys.field_function(a2)
    averaged = rk4_leg(lambda y: (np.asarray(f1(y)) + np.asarray(f2(y))) / 2,
                       np.asarray(x0, dtype=float), h, 2 * steps)
    bracket = lie_bracket(sys, x0, a1, a2)
    return float(np.linalg.norm(
        record.endpoint - averaged[-1] - bracket * t * t / 2))


def localization_time(sys, center, radius, delta, samples=200, seed=0):
    """
    A sampled bound M on |f| over the ball of the given radius, and the
    time (radius - delta)/M during which trajectories from the delta
    ball cannot leave it.
    """
    if not 0 <= delta < radius:
        raise InputError(u'Need 0 <= delta < radius')
    center = np.asarray(center, dtype=float)
    random = np.random.RandomState(seed)
    directions = random.normal(size=(samples, sys.n))
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    radii = radius * random.uniform(size=samples) ** (1.0 / sys.n)
    points = [center] + list(center + directions * radii[:, None])

    if sys.kind == GENERAL:
        controls = list(sys.controls)
    else:
        controls = list(sphere_directions(sys.m, 64))
    bound = max(float(np.linalg.norm(field_value(sys, p, a)))
                for p in points for a in controls)
    time = (radius - delta) / bound if bound > 0 else float('inf')
    return Localization(bound, time)


###################
# Export
###################

def write_trajectory_csv(record, path, sys, u=None, digits=17):
    """Columns time, one per state variable, u (when known), control."""
    fmt = u'%%.%dg' % digits
    u_values = record.u_values
    if u_values is None and u is not None:
        u_values = [eval_value(u, s) for s in record.states]
    labels = [c.label or u'a%d' % (i + 1)
              for i, c in enumerate(record.controls)]

    with open(path, 'w', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        header = [u'time'] + list(sys.state_vars)
        if u_values is not None:
            header.append(u'u')
        writer.writerow(header + [u'control_label'])
        for i, (time, state) in enumerate(zip(record.times, record.states)):
            row = [fmt % time] + [fmt % v for v in state]
            if u_values is not None:
                row.append(fmt % u_values[i])
            index = 0 if i < record.switch_index else 1
            writer.writerow(row + [labels[index]])
    _log.info("Wrote %d trajectory rows to %s", len(record.times), path)
