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

"""Log-log least-squares fits of F_t against t."""

from dataclasses import dataclass

import numpy as np

MIN_WINDOW = 10


class RateFitError(ValueError):
    """Window too short, or F_t not positive on it."""


@dataclass(frozen=True)
class RateFit:
    window: tuple
    slope: float
    intercept: float
    r2: float


def _series(metrics):
    if hasattr(metrics, 'F') and hasattr(metrics, 't'):
        return (np.asarray(metrics.t, dtype=np.float64),
                np.asarray(metrics.F, dtype=np.float64))
    t, F = metrics
    return np.asarray(t, dtype=np.float64), np.asarray(F, dtype=np.float64)


def tail_window(rounds, fraction=0.5):
    """(start, end) covering the last `fraction` of rounds 1..T, inclusive."""
    rounds = int(rounds)
    start = max(1, int(np.floor(rounds * (1.0 - fraction))))
    return start, rounds


def fit_rate(metrics, window=None):
    """Fit log F_t = intercept + slope * log t over t in [start, end].

    `metrics` is a TraceMetrics or a (t, F) pair; the default window is the
    tail half of the rounds.
    """
    t, F = _series(metrics)
    if window is None:
        window = tail_window(t[-1] if len(t) else 0)
    start, end = int(window[0]), int(window[1])
    if start < 1:
        raise RateFitError('window must start at t >= 1, got {}'.format(start))

    mask = (t >= start) & (t <= end)
    if int(mask.sum()) < MIN_WINDOW:
        raise RateFitError('window [{}, {}] has {} points, need at least {}'
                           .format(start, end, int(mask.sum()), MIN_WINDOW))
    t, F = t[mask], F[mask]
    if not np.all(np.isfinite(F)) or np.any(F <= 0.0):
        raise RateFitError(
            'F_t must be positive on [{}, {}]: converged below the f* slack '
            'or diverged; shrink the window or report saturation'.format(
                start, end))

    log_t, log_F = np.log(t), np.log(F)
    slope, intercept = np.polyfit(log_t, log_F, 1)
    fitted = intercept + slope * log_t
    ss_res = float(np.sum((log_F - fitted) ** 2))
    ss_tot = float(np.sum((log_F - log_F.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    r2 = min(1.0, max(0.0, r2))
    return RateFit(window=(start, end), slope=float(slope),
                   intercept=float(intercept), r2=r2)
