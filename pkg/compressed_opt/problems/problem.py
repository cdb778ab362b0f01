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

"""Distributed objective f(x) = (1/n) sum_i f_i(x)."""

from abc import ABC, abstractmethod

import numpy as np


class ProblemError(ValueError):
    """Raised for degenerate problem definitions."""


class Problem(ABC):
    """Base class for finite-sum objectives split over n clients.

    Subclasses implement the per-client value and gradient; averages over
    clients are always accumulated in ascending client order.
    """

    kind = None

    def __init__(self, n_clients, dimension):
        if int(n_clients) < 1:
            raise ProblemError('n_clients must be positive, got {}'.format(
                n_clients))
        if int(dimension) < 1:
            raise ProblemError('dimension must be positive, got {}'.format(
                dimension))
        self.n_clients = int(n_clients)
        self.dimension = int(dimension)

    @abstractmethod
    def client_value(self, client, x):
        pass

    @abstractmethod
    def client_gradient(self, client, x):
        pass

    @abstractmethod
    def client_smoothness(self):
        """Upper bounds on the smoothness constants L_i of every f_i."""
        pass

    @abstractmethod
    def smoothness(self):
        """Upper bound on the smoothness constant L of f."""
        pass

    def value(self, x):
        total = 0.0
        for i in range(self.n_clients):
            total += self.client_value(i, x)
        return total / self.n_clients

    def full_gradient(self, client, x):
        """Exact gradient of f_client, or of f when client is None."""
        x = np.asarray(x, dtype=np.float64)
        if client is not None:
            return self.client_gradient(client, x)
        total = np.zeros(self.dimension)
        for i in range(self.n_clients):
            total += self.client_gradient(i, x)
        return total / self.n_clients

    def bregman(self, x, y):
        """f(y) - f(x) - <grad f(x), y - x>."""
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        return (self.value(y) - self.value(x)
                - float(self.full_gradient(None, x) @ (y - x)))

    def max_client_smoothness(self):
        return float(np.max(self.client_smoothness()))

    def gradient_dissimilarity(self, points):
        """max over points of (1/n) sum_i ||grad f_i(x) - grad f(x)||^2."""
        worst = 0.0
        for x in points:
            mean = self.full_gradient(None, x)
            total = 0.0
            for i in range(self.n_clients):
                diff = self.client_gradient(i, x) - mean
                total += float(diff @ diff)
            worst = max(worst, total / self.n_clients)
        return worst

    def _check_client(self, client):
        if not 0 <= client < self.n_clients:
            raise IndexError('client {} out of range [0, {})'.format(
                client, self.n_clients))
