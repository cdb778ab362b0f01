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

"""Empirical contraction estimates."""

from dataclasses import dataclass

import numpy as np

from .compressor import CompressionError


@dataclass(frozen=True)
class ContractionEstimate:
    """Worst trial vector's mean relative error and its standard error."""
    ratio: float
    standard_error: float
    worst_index: int


def relative_errors(compressor, x, samples, rng):
    """||C(x) - x||^2 / ||x||^2 for `samples` independent calls."""
    x = np.asarray(x, dtype=np.float64)
    norm_sq = float(x @ x)
    if norm_sq == 0.0:
        raise CompressionError('trial vectors must be nonzero')
    out = np.empty(samples)
    for s in range(samples):
        residual = compressor.compress(x, rng).output - x
        out[s] = float(residual @ residual) / norm_sq
    return out


def estimate_contraction_detailed(compressor, trial_vectors, samples_per_vector,
                                  rng):
    samples_per_vector = int(samples_per_vector)
    if samples_per_vector < 1:
        raise CompressionError('samples_per_vector must be positive')
    if len(trial_vectors) == 0:
        raise CompressionError('need at least one trial vector')

    best = None
    for index, x in enumerate(trial_vectors):
        errors = relative_errors(compressor, x, samples_per_vector, rng)
        mean = float(errors.mean())
        if samples_per_vector > 1:
            stderr = float(errors.std(ddof=1) / np.sqrt(samples_per_vector))
        else:
            stderr = 0.0
        if best is None or mean > best.ratio:
            best = ContractionEstimate(mean, stderr, index)
    return best


def estimate_contraction(compressor, trial_vectors, samples_per_vector, rng):
    """Max over trial vectors of the mean relative squared error.

    For a delta-contractive compressor the result should not exceed
    1 - delta beyond sampling noise.
    """
    return estimate_contraction_detailed(
        compressor, trial_vectors, samples_per_vector, rng).ratio
