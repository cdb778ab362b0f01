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

"""Convex quadratics f_i(x) = 1/2 (x - c_i)^T H_i (x - c_i)."""

import numpy as np

from compressed_opt.enums import ProblemKind

from .problem import Problem, ProblemError


class QuadraticProblem(Problem):

    kind = ProblemKind.quadratic

    def __init__(self, hessians, centers):
        if len(hessians) != len(centers) or len(hessians) == 0:
            raise ProblemError('need one center per hessian, got {} and {}'
                               .format(len(hessians), len(centers)))
        hessians = [np.atleast_2d(np.asarray(h, dtype=np.float64))
                    for h in hessians]
        centers = [np.atleast_1d(np.asarray(c, dtype=np.float64))
                   for c in centers]
        dimension = centers[0].shape[0]
        for i, (h, c) in enumerate(zip(hessians, centers)):
            if h.shape != (dimension, dimension) or c.shape != (dimension,):
                raise ProblemError(
                    'client {}: hessian {} and center {} do not match d={}'
                    .format(i, h.shape, c.shape, dimension))
            if not np.allclose(h, h.T):
                raise ProblemError('client {} hessian is not symmetric'
                                   .format(i))
            if np.linalg.eigvalsh(h)[0] < -1e-12:
                raise ProblemError('client {} hessian is not positive '
                                   'semidefinite'.format(i))
        super().__init__(len(hessians), dimension)
        self.hessians = hessians
        self.centers = centers

    def client_value(self, client, x):
        self._check_client(client)
        r = x - self.centers[client]
        return 0.5 * float(r @ self.hessians[client] @ r)

    def client_gradient(self, client, x):
        self._check_client(client)
        return self.hessians[client] @ (x - self.centers[client])

    def client_smoothness(self):
        return np.array([np.linalg.eigvalsh(h)[-1] for h in self.hessians])

    def smoothness(self):
        mean = sum(self.hessians) / self.n_clients
        return float(np.linalg.eigvalsh(mean)[-1])


def make_quadratic(hessians, centers):
    return QuadraticProblem(hessians, centers)


def isotropic_quadratic(center, n_clients=1, scale=1.0):
    """f(x) = scale/2 ||x - center||^2 held identically by every client."""
    center = np.atleast_1d(np.asarray(center, dtype=np.float64))
    h = scale * np.eye(center.shape[0])
    return QuadraticProblem([h] * n_clients, [center] * n_clients)


def generate_synthetic_quadratic(n_clients, d, heterogeneity=0.0, eig_min=0.01,
                                 eig_max=1.0, seed=0):
    """Shared random eigenbasis with log-spaced spectrum in [eig_min, eig_max].

    Client centers spread around a common center by `heterogeneity`; each
    client also rescales its spectrum by a factor in [1 - h/2, 1 + h/2].
    """
    if int(n_clients) < 1 or int(d) < 1:
        raise ProblemError('n_clients and d must be positive')
    if not 0.0 <= heterogeneity <= 1.0:
        raise ProblemError('heterogeneity must lie in [0, 1], got {}'.format(
            heterogeneity))
    if not 0.0 <= eig_min <= eig_max or eig_max <= 0.0:
        raise ProblemError('need 0 <= eig_min <= eig_max and eig_max > 0')

    rng = np.random.default_rng(int(seed))
    basis, _ = np.linalg.qr(rng.standard_normal((int(d), int(d))))
    if eig_min > 0.0:
        spectrum = np.geomspace(eig_min, eig_max, int(d))
    else:
        spectrum = np.linspace(eig_min, eig_max, int(d))
    center = rng.standard_normal(int(d))

    hessians, centers = [], []
    for _ in range(int(n_clients)):
        scale = 1.0 + heterogeneity * (rng.random() - 0.5)
        h = (basis * (scale * spectrum)) @ basis.T
        hessians.append(0.5 * (h + h.T))
        centers.append(center + heterogeneity * rng.standard_normal(int(d)))
    return QuadraticProblem(hessians, centers)
