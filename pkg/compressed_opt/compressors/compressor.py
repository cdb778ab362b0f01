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

"""Contractive compression operators."""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np


class CompressionError(ValueError):
    """Raised for invalid compressor parameters or inputs."""


class NonFiniteInputError(CompressionError):
    """A compressor was handed a vector with inf or NaN entries."""


@dataclass(frozen=True)
class CompressionResult:
    """Output of one compression call and what it cost to transmit."""
    output: np.ndarray
    transmitted_scalars: int
    transmitted_indices: int


class Compressor(ABC):
    """Base class for all compressors.

    A compressor is bound to the dimension d of the vectors it sees. It is
    stateless: every call draws its randomness from the stream passed in,
    so the same stream state gives the same output.
    """

    is_absolute = False

    def __init__(self, dimension):
        dimension = int(dimension)
        if dimension < 1:
            raise CompressionError(
                'dimension must be positive, got {}'.format(dimension))
        self.dimension = dimension

    def __call__(self, x, rng=None):
        return self.compress(x, rng)

    def compress(self, x, rng=None):
        x = self._check_input(x)
        return self._compress(x, rng)

    @abstractmethod
    def _compress(self, x, rng):
        pass

    @abstractmethod
    def contraction_parameter(self):
        """δ for contractive kinds, Δ for absolute kinds."""
        pass

    @abstractmethod
    def describe(self):
        """JSON-ready description, the inverse of build_compressor."""
        pass

    @property
    def messages_per_call(self):
        return 1

    def _check_input(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or x.shape[0] != self.dimension:
            raise CompressionError(
                '{} expects a vector of dimension {}, got shape {}'.format(
                    type(self).__name__, self.dimension, x.shape))
        if not np.all(np.isfinite(x)):
            raise NonFiniteInputError(
                '{} received a non-finite input'.format(type(self).__name__))
        return x

    def __repr__(self):
        return '{}({})'.format(type(self).__name__, self.describe())


class Identity(Compressor):
    """Lossless channel: sends all d coordinates, no indices."""

    def _compress(self, x, rng):
        return CompressionResult(x.copy(), self.dimension, 0)

    def contraction_parameter(self):
        return 1.0

    def describe(self):
        return {'kind': 'identity'}


class _SparsifierBase(Compressor):

    def __init__(self, dimension, k):
        super().__init__(dimension)
        k = int(k)
        if not 1 <= k <= self.dimension:
            raise CompressionError(
                'k must satisfy 1 <= k <= d = {}, got k = {}'.format(
                    self.dimension, k))
        self.k = k

    def contraction_parameter(self):
        return self.k / self.dimension

    def _sparse_result(self, x, indices):
        output = np.zeros_like(x)
        output[indices] = x[indices]
        return CompressionResult(output, self.k, self.k)


class TopK(_SparsifierBase):
    """Keep the k largest-magnitude coordinates, ties go to the lower index."""

    def _compress(self, x, rng):
        # stable sort on -|x| keeps equal magnitudes in index order
        order = np.argsort(-np.abs(x), kind='stable')
        return self._sparse_result(x, order[:self.k])

    def describe(self):
        return {'kind': 'topk', 'k': self.k}


class RandK(_SparsifierBase):
    """Keep k uniformly chosen coordinates, unscaled."""

    def _compress(self, x, rng):
        if rng is None:
            raise CompressionError('RandK needs a random stream')
        indices = rng.choice(self.dimension, size=self.k, replace=False)
        return self._sparse_result(x, np.sort(indices))

    def describe(self):
        return {'kind': 'randk', 'k': self.k}


class Repeated(Compressor):
    """Apply a contractive base compressor R times to the running residual.

    c_0 = 0, c_q = c_{q-1} + C(x - c_{q-1}); the client sends every
    increment and the server adds them up, so one call costs R base
    messages.
    """

    def __init__(self, base, rounds):
        super().__init__(base.dimension)
        if base.is_absolute:
            raise CompressionError(
                'Repeated needs a contractive base, got {}'.format(
                    type(base).__name__))
        rounds = int(rounds)
        if rounds < 1:
            raise CompressionError(
                'rounds must be at least 1, got {}'.format(rounds))
        self.base = base
        self.rounds = rounds

    def _compress(self, x, rng):
        approx = np.zeros_like(x)
        scalars = indices = 0
        for _ in range(self.rounds):
            result = self.base._compress(x - approx, rng)
            approx = approx + result.output
            scalars += result.transmitted_scalars
            indices += result.transmitted_indices
        return CompressionResult(approx, scalars, indices)

    def contraction_parameter(self):
        return 1.0 - (1.0 - self.base.contraction_parameter()) ** self.rounds

    @property
    def messages_per_call(self):
        return self.rounds * self.base.messages_per_call

    def describe(self):
        return {'kind': 'repeated', 'base': self.base.describe(),
                'rounds': self.rounds}


def rounds_for_exact_reconstruction(dimension, k):
    """Repetitions of TopK(k) after which the residual is exactly zero."""
    return int(math.ceil(dimension / k))
