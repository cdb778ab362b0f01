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

"""Theory-mode constants: the step scale M and the NEOLITHIC repetition R."""

import math
from dataclasses import dataclass

from compressed_opt.enums import MethodKind
from compressed_opt.learning_rates import ScheduleError


@dataclass(frozen=True)
class ProblemConstants:
    """L: smoothness of f; ell: bound on the client smoothness; sigma2:
    oracle variance; n: clients; R0_sq: ||v_0 - x*||^2; zeta2: gradient
    dissimilarity; Delta: absolute compression error bound."""
    L: float
    ell: float
    sigma2: float
    n: int
    R0_sq: float
    zeta2: float = 0.0
    Delta: float = 0.0


def _cbrt(value):
    return value ** (1.0 / 3.0)


def theorem_branches(method, constants, delta, rounds):
    """Each branch of the max defining M, in order."""
    method = MethodKind(method)
    T = int(rounds)
    if T <= 0:
        raise ScheduleError('theory constants need T >= 1, got T = {}'.format(
            rounds))
    c = constants
    if c.sigma2 > 0.0 or (method == MethodKind.absolute and c.Delta > 0.0) or \
            (method == MethodKind.vanilla and c.zeta2 > 0.0):
        if not c.R0_sq > 0.0:
            raise ScheduleError('R0_sq must be positive, got {}'.format(
                c.R0_sq))
    if method in (MethodKind.adef, MethodKind.vanilla):
        if delta is None or not 0.0 < delta <= 1.0:
            raise ScheduleError('delta must lie in (0, 1], got {}'.format(
                delta))

    if method == MethodKind.adef:
        shift = T + 32.0 / delta
        return [
            2.0 ** 13 * c.ell / delta ** 4,
            math.sqrt(4.0 * T * shift ** 2 * c.sigma2 / (c.R0_sq * c.n))
            if c.sigma2 > 0.0 else 0.0,
            8.0 * _cbrt(c.L * T * shift ** 3 * c.sigma2
                        / (delta ** 4 * c.R0_sq))
            if c.sigma2 > 0.0 else 0.0,
        ]
    elif method == MethodKind.vanilla:
        shift = T + 4.0 / delta
        noise = 4.0 * c.zeta2 + delta * c.sigma2
        return [
            40.0 * c.L * shift / delta,
            math.sqrt(4.0 * T * shift ** 2 * c.sigma2 / (c.R0_sq * c.n))
            if c.sigma2 > 0.0 else 0.0,
            _cbrt(544.0 * c.L * noise * T * shift ** 3
                  / (delta ** 2 * c.R0_sq))
            if noise > 0.0 else 0.0,
        ]
    elif method == MethodKind.absolute:
        return [
            24.0 * c.L,
            math.sqrt(4.0 * T ** 3 * c.sigma2 / (c.n * c.R0_sq))
            if c.sigma2 > 0.0 else 0.0,
            _cbrt(2.0 * c.L * c.Delta ** 2 * (T + 16) * T ** 5 / c.R0_sq)
            if c.Delta > 0.0 else 0.0,
        ]
    elif method == MethodKind.neolithic:
        return [
            24.0 * c.L,
            math.sqrt(12.0 * T ** 3 * c.sigma2 / (c.n * c.R0_sq))
            if c.sigma2 > 0.0 else 0.0,
        ]
    raise ScheduleError('no theory constants for method {}'.format(
        method.value))


def theorem_M(method, constants, delta, rounds):
    """M for theory-mode schedules: the max over theorem_branches."""
    return max(theorem_branches(method, constants, delta, rounds))


def neolithic_rounds(delta, n_clients, rounds, sigma2=0.0, zeta2=0.0):
    """R = ceil(max{(4/d) ln T, (1/d) ln(4nT^2/3), (1/d) ln(4n zeta2 T^2 /
    (3 sigma2))}), at least 1.

    Terms whose logarithm is undefined (sigma2 = 0 or zeta2 = 0) are left
    out.
    """
    if not 0.0 < delta <= 1.0:
        raise ScheduleError('delta must lie in (0, 1], got {}'.format(delta))
    T = int(rounds)
    if T <= 0:
        raise ScheduleError('need T >= 1, got T = {}'.format(rounds))
    terms = [4.0 / delta * math.log(T),
             math.log(4.0 * n_clients * T ** 2 / 3.0) / delta]
    if sigma2 > 0.0 and zeta2 > 0.0:
        terms.append(
            math.log(4.0 * n_clients * zeta2 * T ** 2 / (3.0 * sigma2))
            / delta)
    return max(1, int(math.ceil(max(terms))))
