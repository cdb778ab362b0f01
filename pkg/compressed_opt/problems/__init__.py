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

from compressed_opt.enums import ProblemKind

from .logistic import (
    DEFAULT_REG,
    LogisticProblem,
    generate_synthetic_logistic,
    logistic_loss,
    logistic_loss_gradient,
    sigmoid,
)
from .oracle import GaussianOracle
from .problem import Problem, ProblemError
from .quadratic import (
    QuadraticProblem,
    generate_synthetic_quadratic,
    isotropic_quadratic,
    make_quadratic,
)
from .reference import ReferenceSolution, ReferenceSolveError, solve_reference


def full_gradient(problem, client, x):
    return problem.full_gradient(client, x)


def stochastic_gradient(oracle, client, x, rng):
    return oracle.stochastic_gradient(client, x, rng)


def bregman(problem, x, y):
    return problem.bregman(x, y)


def build_problem(config):
    """Build a Problem from a ProblemConfig."""
    if config.kind == ProblemKind.logistic:
        return generate_synthetic_logistic(
            config.n_clients, config.d, config.samples_per_client,
            heterogeneity=config.heterogeneity, seed=config.seed,
            reg=config.reg, flip_y=config.flip_y,
            class_sep=config.class_sep, feature_decay=config.feature_decay)
    elif config.kind == ProblemKind.quadratic:
        return generate_synthetic_quadratic(
            config.n_clients, config.d, heterogeneity=config.heterogeneity,
            eig_min=config.eig_min, eig_max=config.eig_max, seed=config.seed)
    raise ProblemError('{} problem is not supported.'.format(config.kind))


def build_oracle(problem, config):
    return GaussianOracle(problem, sigma2=config.sigma2,
                          batch_size=config.batch_size)
