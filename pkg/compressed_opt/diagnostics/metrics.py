# coding=utf-8
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Per-round analysis quantities computed from round traces."""

from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

METRIC_COLUMNS = ('t', 'F', 'E', 'Ebar', 'H', 'R2', 'comm_scalars',
                  'comm_indices', 'messages')
WEIGHT_COLUMNS = ('w', 'w_prime')

_REQUIRED_FIELDS = ('t', 'a', 'A', 'ghat', 'gbar', 'x_next', 'v_next',
                    'comm_scalars', 'comm_indices', 'messages')


class MissingTraceFieldError(KeyError):
    """A trace record lacks a field needed for the requested metric."""


@dataclass
class TraceMetrics:
    """Columns of the metrics table, one entry per round t = 0..T.

    F_t = f(x_t) - f*, E_t = ||sum_{j<t} a_{j+1}(ghat_j - g_j)||^2,
    Ebar_t = avg_i ||e_t^i||^2, H_t = avg_i ||g_t^i - g_tilde_t^i||^2,
    R2_t = ||v_t - x*||^2, and cumulative communication including setup.
    Undefined entries are NaN.
    """
    t: np.ndarray
    F: np.ndarray
    E: np.ndarray
    Ebar: np.ndarray
    H: np.ndarray
    R2: np.ndarray
    comm_scalars: np.ndarray
    comm_indices: np.ndarray
    messages: np.ndarray
    w: Optional[np.ndarray] = None
    w_prime: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.t)

    @property
    def columns(self):
        if self.w is None:
            return METRIC_COLUMNS
        return METRIC_COLUMNS + WEIGHT_COLUMNS

    def column(self, name):
        return getattr(self, name)

    def rows(self):
        columns = [self.column(name) for name in self.columns]
        for i in range(len(self)):
            yield tuple(c[i] for c in columns)

    def head(self, length):
        """The first `length` rounds."""
        values = {}
        for f in fields(self):
            column = getattr(self, f.name)
            values[f.name] = None if column is None else column[:length]
        return TraceMetrics(**values)


def _get(record, name):
    if isinstance(record, dict):
        if name not in record:
            raise MissingTraceFieldError(
                'trace record for round {} has no field {!r}'.format(
                    record.get('t', '?'), name))
        value = record[name]
    else:
        if not hasattr(record, name):
            raise MissingTraceFieldError(
                'trace record has no field {!r}'.format(name))
        value = getattr(record, name)
    return value


def _vector(record, name):
    value = _get(record, name)
    return None if value is None else np.asarray(value, dtype=np.float64)


def _check_trace(trace):
    for t, record in enumerate(trace):
        for name in _REQUIRED_FIELDS:
            _get(record, name)
        if int(_get(record, 't')) != t:
            raise MissingTraceFieldError(
                'trace record {} is labelled round {}'.format(
                    t, _get(record, 't')))


def accumulated_errors(trace):
    """Running sums s_t = sum_{j<t} a_{j+1} (ghat_j - g_j), t = 0..T."""
    if not trace:
        return []
    s = np.zeros_like(_vector(trace[0], 'ghat'))
    sums = [s]
    for record in trace:
        s = s + _get(record, 'a') * (_vector(record, 'ghat')
                                     - _vector(record, 'gbar'))
        sums.append(s)
    return sums


def error_identity_residuals(trace):
    """||avg_i e_t^i - s_t|| / (1 + ||s_t||) for t = 1..T."""
    sums = accumulated_errors(trace)
    residuals = []
    for record, s in zip(trace, sums[1:]):
        error_mean = _vector(record, 'error_mean')
        if error_mean is None:
            raise MissingTraceFieldError(
                'round {} has no error memory to compare'.format(
                    _get(record, 't')))
        residuals.append(float(np.linalg.norm(error_mean - s))
                         / (1.0 + float(np.linalg.norm(s))))
    return np.array(residuals)


def compute_metrics(trace, problem, reference, initial, setup=None,
                    with_weights=False):
    """Metrics table for rounds 0..T.

    `initial` is the server state at t = 0 (x_0, v_0, A_0) and `setup` the
    one-time traffic charged before round 0.
    """
    _check_trace(trace)
    T = len(trace)
    x_star = np.asarray(reference.x_star, dtype=np.float64)
    f_star = reference.f_star

    xs = [np.asarray(initial.x, dtype=np.float64)]
    vs = [np.asarray(initial.v, dtype=np.float64)]
    for record in trace:
        xs.append(_vector(record, 'x_next'))
        vs.append(_vector(record, 'v_next'))

    F = np.array([problem.value(x) - f_star for x in xs])
    R2 = np.array([float((v - x_star) @ (v - x_star)) for v in vs])
    E = np.array([float(s @ s) for s in accumulated_errors(trace)]) \
        if T else np.zeros(1)

    has_memory = T == 0 or _get(trace[0], 'error_sq_mean') is not None
    Ebar = np.full(T + 1, np.nan)
    if has_memory:
        Ebar[0] = 0.0
        for t, record in enumerate(trace):
            Ebar[t + 1] = _get(record, 'error_sq_mean')

    H = np.full(T + 1, np.nan)
    for t, record in enumerate(trace):
        h = record.get('h') if isinstance(record, dict) else record.h
        if h is not None:
            H[t] = h

    setup_scalars = setup.scalars if setup is not None else 0
    setup_indices = setup.indices if setup is not None else 0
    setup_messages = setup.messages if setup is not None else 0
    scalars = [setup_scalars]
    indices = [setup_indices]
    messages = [setup_messages]
    for record in trace:
        scalars.append(scalars[-1] + int(_get(record, 'comm_scalars')))
        indices.append(indices[-1] + int(_get(record, 'comm_indices')))
        messages.append(messages[-1] + int(_get(record, 'messages')))

    metrics = TraceMetrics(
        t=np.arange(T + 1), F=F, E=E, Ebar=Ebar, H=H, R2=R2,
        comm_scalars=np.array(scalars, dtype=np.int64),
        comm_indices=np.array(indices, dtype=np.int64),
        messages=np.array(messages, dtype=np.int64))
    if with_weights:
        metrics.w, metrics.w_prime = proof_weights(trace, problem.smoothness())
    return metrics


def proof_weights(trace, L):
    """w_t = min{2, a_t L} + 4L a_t^2/A_t + 4L a_{t+1}^2/A_{t+1} and
    w'_t = w_t a_t^2, for t = 1..T-1; NaN elsewhere."""
    T = len(trace)
    w = np.full(T + 1, np.nan)
    w_prime = np.full(T + 1, np.nan)
    for t in range(1, T):
        a_t, A_t = _get(trace[t - 1], 'a'), _get(trace[t - 1], 'A')
        a_next, A_next = _get(trace[t], 'a'), _get(trace[t], 'A')
        w[t] = (min(2.0, a_t * L) + 4.0 * L * a_t ** 2 / A_t
                + 4.0 * L * a_next ** 2 / A_next)
        w_prime[t] = w[t] * a_t ** 2
    return w, w_prime


def average_metrics(runs):
    """Column-wise mean over seeds, truncated to the shortest run."""
    if not runs:
        raise ValueError('need at least one run to average')
    length = min(len(m) for m in runs)
    runs = [m.head(length) for m in runs]
    values = {}
    for f in fields(TraceMetrics):
        columns = [getattr(m, f.name) for m in runs]
        if any(c is None for c in columns):
            values[f.name] = None
        elif f.name == 't':
            values[f.name] = columns[0].copy()
        else:
            values[f.name] = np.mean(
                np.stack([c.astype(np.float64) for c in columns]), axis=0)
    return TraceMetrics(**values)
