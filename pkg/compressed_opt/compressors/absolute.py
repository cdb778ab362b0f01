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

"""Absolute compression operators: ||C(x) - x||^2 <= Delta^2 for every x."""

import math

import numpy as np

from .compressor import CompressionError, CompressionResult, Compressor


class _AbsoluteCompressor(Compressor):

    is_absolute = True

    def error_bound_sq(self):
        """Declared worst-case squared error Delta^2."""
        return self.contraction_parameter() ** 2


class AbsoluteRound(_AbsoluteCompressor):
    """Round every coordinate to the nearest multiple of `step`.

    Per-coordinate error is at most step/2, so Delta^2 = d * step^2 / 4.
    Sent dense: d scalars.
    """

    def __init__(self, dimension, step):
        super().__init__(dimension)
        step = float(step)
        if not step > 0.0 or not math.isfinite(step):
            raise CompressionError(
                'absolute_round step must be positive, got {}'.format(step))
        self.step = step

    def _compress(self, x, rng):
        output = np.round(x / self.step) * self.step
        return CompressionResult(output, self.dimension, 0)

    def contraction_parameter(self):
        return math.sqrt(self.dimension * self.step ** 2 / 4.0)

    def describe(self):
        return {'kind': 'absolute_round', 'step': self.step}


class AbsoluteThreshold(_AbsoluteCompressor):
    """Zero every coordinate with |x_i| <= threshold.

    Delta^2 = d * threshold^2. A zero threshold is lossless.
    """

    def __init__(self, dimension, threshold):
        super().__init__(dimension)
        threshold = float(threshold)
        if not threshold >= 0.0 or not math.isfinite(threshold):
            raise CompressionError(
                'absolute_threshold threshold must be nonnegative, '
                'got {}'.format(threshold))
        self.threshold = threshold

    def _compress(self, x, rng):
        output = np.where(np.abs(x) > self.threshold, x, 0.0)
        return CompressionResult(output, self.dimension, 0)

    def contraction_parameter(self):
        return math.sqrt(self.dimension) * self.threshold

    def describe(self):
        return {'kind': 'absolute_threshold', 'threshold': self.threshold}
