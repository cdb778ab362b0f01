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

"""Reference optimum by deterministic accelerated gradient descent."""

import logging
import math
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)


class ReferenceSolveError(RuntimeError):
    """Raised when the solver hits its iteration cap."""


@dataclass(frozen=True)
class ReferenceSolution:
    x_star: np.ndarray
    f_star: float
    solve_tolerance: float
    gradient_norm: float
    iterations: int


def solve_reference(problem, tolerance=1e-10, max_iterations=200000, x0=None):
    """Run Nesterov's method with step 1/L and gradient-based restarts
    until ||grad f(x)|| <= tolerance.
    """
    if tolerance <= 0.0:
        raise ValueError('tolerance must be positive, got {}'.format(
            tolerance))
    step = 1.0 / problem.smoothness()
    x = np.zeros(problem.dimension) if x0 is None else np.array(
        x0, dtype=np.float64)

    gradient = problem.full_gradient(None, x)
    norm = float(np.linalg.norm(gradient))
    y = x.copy()
    momentum = 1.0
    iteration = 0
    while norm > tolerance:
        if iteration >= max_iterations:
            raise ReferenceSolveError(
                'reference solve stopped after {} iterations with '
                '||grad f|| = {:.3e} > {:.3e}'.format(
                    iteration, norm, tolerance))
        x_next = y - step * problem.full_gradient(None, y)
        momentum_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * momentum ** 2))
        if float((y - x_next) @ (x_next - x)) > 0.0:
            # restart when momentum points uphill
            momentum_next = 1.0
            y = x_next.copy()
        else:
            y = x_next + ((momentum - 1.0) / momentum_next) * (x_next - x)
        x = x_next
        momentum = momentum_next
        gradient = problem.full_gradient(None, x)
        norm = float(np.linalg.norm(gradient))
        iteration += 1

    f_star = problem.value(x)
    logger.info('reference solution: f* = %.12e, ||grad f|| = %.3e after %d '
                'iterations', f_star, norm, iteration)
    return ReferenceSolution(x_star=x, f_star=f_star, solve_tolerance=tolerance,
                             gradient_norm=norm, iterations=iteration)
