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

import math

import numpy as np

from .problem import ProblemError


class GaussianOracle:
    """Unbiased stochastic gradients g_i(x) = grad f_i(x) + noise.

    The noise is N(0, sigma2 / (d * batch_size) I), so
    E||noise||^2 = sigma2 / batch_size.
    """

    noise_kind = 'gaussian_additive'

    def __init__(self, problem, sigma2=0.0, batch_size=1):
        if sigma2 < 0.0 or not math.isfinite(sigma2):
            raise ProblemError('sigma2 must be nonnegative, got {}'.format(
                sigma2))
        if int(batch_size) < 1:
            raise ProblemError('batch_size must be positive, got {}'.format(
                batch_size))
        self.problem = problem
        self.sigma2 = float(sigma2)
        self.batch_size = int(batch_size)
        self._noise_std = math.sqrt(
            self.sigma2 / (problem.dimension * self.batch_size))

    @property
    def variance(self):
        return self.sigma2 / self.batch_size

    def stochastic_gradient(self, client, x, rng):
        gradient = self.problem.full_gradient(client, x)
        if self.sigma2 == 0.0:
            return gradient
        return gradient + self._noise_std * rng.standard_normal(
            self.problem.dimension)

    def __call__(self, client, x, rng):
        return self.stochastic_gradient(client, x, rng)
