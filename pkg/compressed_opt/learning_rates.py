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

"""Step-size schedules a_t, A_t of the accelerated methods."""

import logging
import math
from abc import ABC, abstractmethod

from compressed_opt.enums import ScheduleKind

logger = logging.getLogger(__name__)

MIN_STEP = 1e-12


class ScheduleError(ValueError):
    """Raised when a schedule has nonpositive steps or bad parameters."""


class StepSchedule(ABC):
    """Yields a_t for t >= 1 and the initial weight A_0.

    A_{t+1} = A_t + a_{t+1}. The accelerated round t uses a_{t+1} and
    A_t; error feedback divides by a_{t+1}, so every a_t must exceed
    MIN_STEP.
    """

    kind = None

    def __init__(self, A0=0.0):
        A0 = float(A0)
        if A0 < 0.0 or not math.isfinite(A0):
            raise ScheduleError('A0 must be finite and nonnegative, got {}'
                                .format(A0))
        self.A0 = A0

    @abstractmethod
    def get_a(self, t):
        """a_t for t >= 1."""
        pass

    def __call__(self, t):
        return self.get_a(t)

    def weights(self, rounds):
        """[(a_1, A_1), ..., (a_T, A_T)] accumulated in order."""
        out = []
        A = self.A0
        for t in range(1, rounds + 1):
            a = self.get_a(t)
            A = A + a
            out.append((a, A))
        return out

    def get_A(self, t):
        A = self.A0
        for j in range(1, t + 1):
            A = A + self.get_a(j)
        return A

    def validate(self, rounds):
        """Check a_t > MIN_STEP and strictly increasing A_t for t <= rounds."""
        A = self.A0
        for t in range(1, rounds + 1):
            a = self.get_a(t)
            if not math.isfinite(a) or a <= MIN_STEP:
                raise ScheduleError(
                    '{} schedule gives a_{} = {!r}; every step must exceed '
                    '{}'.format(self.kind.value, t, a, MIN_STEP))
            A_next = A + a
            if not A_next > A:
                raise ScheduleError(
                    '{} schedule: A_{} = {!r} does not increase'.format(
                        self.kind.value, t, A_next))
            A = A_next
        return self

    def state_dict(self):
        state_dict = {'kind': self.kind.value, 'A0': self.A0}
        state_dict.update(self._params())
        return state_dict

    @abstractmethod
    def _params(self):
        pass

    def __repr__(self):
        return '{}({})'.format(type(self).__name__, self.state_dict())


def _check_positive(name, value):
    value = float(value)
    if not value > 0.0 or not math.isfinite(value):
        raise ScheduleError('{} must be positive, got {}'.format(name, value))
    return value


def _check_delta(delta):
    delta = _check_positive('delta', delta)
    if delta > 1.0:
        raise ScheduleError('delta must lie in (0, 1], got {}'.format(delta))
    return delta


class TheoremADEFSchedule(StepSchedule):
    """a_t = (t + 32/delta) / M, A_0 = 32^2 / (2 delta^2 M)."""

    kind = ScheduleKind.theorem_adef

    def __init__(self, M, delta):
        self.M = _check_positive('M', M)
        self.delta = _check_delta(delta)
        super().__init__(32.0 ** 2 / (2.0 * self.delta ** 2 * self.M))

    def get_a(self, t):
        return (t + 32.0 / self.delta) / self.M

    def _params(self):
        return {'M': self.M, 'delta': self.delta}


class TheoremVanillaSchedule(StepSchedule):
    """a_t = (t + 4/delta) / M, A_0 = 8 / (delta^2 M).

    The offset is 4/delta; an offset of 4/t would be undefined at t = 0.
    """

    kind = ScheduleKind.theorem_vanilla

    def __init__(self, M, delta):
        self.M = _check_positive('M', M)
        self.delta = _check_delta(delta)
        super().__init__(8.0 / (self.delta ** 2 * self.M))

    def get_a(self, t):
        return (t + 4.0 / self.delta) / self.M

    def _params(self):
        return {'M': self.M, 'delta': self.delta}


class TheoremAbsoluteSchedule(StepSchedule):
    """a_t = t / M, A_0 = 0."""

    kind = ScheduleKind.theorem_absolute

    def __init__(self, M):
        self.M = _check_positive('M', M)
        super().__init__(0.0)

    def get_a(self, t):
        return t / self.M

    def _params(self):
        return {'M': self.M}


class TheoremNeolithicSchedule(TheoremAbsoluteSchedule):
    """Same weights as the absolute schedule: a_t = t / M, A_0 = 0."""

    kind = ScheduleKind.theorem_neolithic


class ExperimentGammaSchedule(StepSchedule):
    """a_t = gamma (t + 1/delta), A_0 = 1/delta^2."""

    kind = ScheduleKind.experiment_gamma

    def __init__(self, gamma, delta):
        self.gamma = _check_positive('gamma', gamma)
        self.delta = _check_delta(delta)
        super().__init__(1.0 / self.delta ** 2)

    def get_a(self, t):
        return self.gamma * (t + 1.0 / self.delta)

    def _params(self):
        return {'gamma': self.gamma, 'delta': self.delta}


class CustomSchedule(StepSchedule):
    """Explicit list [a_1, a_2, ...]."""

    kind = ScheduleKind.custom

    def __init__(self, values, A0=0.0):
        super().__init__(A0)
        self.values = [float(v) for v in values]
        if not self.values:
            raise ScheduleError('custom schedule needs at least one value')

    def get_a(self, t):
        if not 1 <= t <= len(self.values):
            raise ScheduleError('custom schedule has {} values, a_{} '
                                'requested'.format(len(self.values), t))
        return self.values[t - 1]

    def _params(self):
        return {'values': list(self.values)}


class ConstantSchedule(StepSchedule):
    """Constant step eta, used by the unaccelerated error-feedback method."""

    kind = ScheduleKind.constant

    def __init__(self, eta):
        self.eta = _check_positive('eta', eta)
        super().__init__(0.0)

    def get_a(self, t):
        return self.eta

    def _params(self):
        return {'eta': self.eta}


def build_step_schedule(config, delta=None, M=None):
    """Build a schedule from a ScheduleConfig.

    `delta` fills in a missing contraction parameter and `M` a missing
    theory constant.
    """
    kind = ScheduleKind(config.kind)
    if kind in (ScheduleKind.theorem_adef, ScheduleKind.theorem_vanilla,
                ScheduleKind.experiment_gamma):
        delta = config.delta if config.delta is not None else delta
        if delta is None:
            raise ScheduleError('{} schedule needs delta'.format(kind.value))
    if kind in (ScheduleKind.theorem_adef, ScheduleKind.theorem_vanilla,
                ScheduleKind.theorem_absolute,
                ScheduleKind.theorem_neolithic):
        M = config.M if config.M is not None else M
        if M is None:
            raise ScheduleError('{} schedule needs M'.format(kind.value))

    if kind == ScheduleKind.theorem_adef:
        schedule = TheoremADEFSchedule(M, delta)
    elif kind == ScheduleKind.theorem_vanilla:
        schedule = TheoremVanillaSchedule(M, delta)
    elif kind == ScheduleKind.theorem_absolute:
        schedule = TheoremAbsoluteSchedule(M)
    elif kind == ScheduleKind.theorem_neolithic:
        schedule = TheoremNeolithicSchedule(M)
    elif kind == ScheduleKind.experiment_gamma:
        schedule = ExperimentGammaSchedule(config.gamma, delta)
    elif kind == ScheduleKind.custom:
        schedule = CustomSchedule(config.values, A0=config.A0)
    elif kind == ScheduleKind.constant:
        schedule = ConstantSchedule(config.eta)
    else:
        raise ScheduleError('{} schedule is not supported.'.format(kind))

    logger.debug('> step schedule: %s', schedule)
    return schedule
