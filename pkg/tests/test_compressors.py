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
import unittest

import numpy as np
from parameterized import parameterized

from compressed_opt.compressors import (
    AbsoluteRound,
    AbsoluteThreshold,
    CompressionError,
    Identity,
    NonFiniteInputError,
    RandK,
    Repeated,
    TopK,
    build_compressor,
    compress,
    contraction_parameter,
    estimate_contraction,
    estimate_contraction_detailed,
    rounds_for_exact_reconstruction,
)


def _sq(v):
    return float(v @ v)


class TestTopK(unittest.TestCase):
    def test_keeps_largest_magnitudes(self):
        result = TopK(4, 2).compress(np.array([3.0, -1.0, 2.0, 0.5]))
        np.testing.assert_array_equal(result.output, [3.0, 0.0, 2.0, 0.0])
        self.assertEqual(result.transmitted_scalars, 2)
        self.assertEqual(result.transmitted_indices, 2)

    def test_ties_go_to_lower_index(self):
        result = TopK(3, 1).compress(np.array([1.0, -1.0, 1.0]))
        np.testing.assert_array_equal(result.output, [1.0, 0.0, 0.0])

    def test_k_equals_d_is_lossless(self):
        x = np.array([0.3, -2.0, 5.0])
        np.testing.assert_array_equal(TopK(3, 3).compress(x).output, x)

    @parameterized.expand([(1,), (5,), (25,)])
    def test_contractive_per_call(self, k):
        rng = np.random.default_rng(0)
        compressor = TopK(50, k)
        bound = 1.0 - k / 50
        for _ in range(100):
            x = rng.standard_normal(50)
            residual = compressor(x).output - x
            self.assertLessEqual(_sq(residual), bound * _sq(x))

    def test_zero_vector(self):
        result = TopK(5, 2).compress(np.zeros(5))
        np.testing.assert_array_equal(result.output, np.zeros(5))

    @parameterized.expand([(0,), (6,)])
    def test_rejects_bad_k(self, k):
        with self.assertRaises(CompressionError):
            TopK(5, k)


class TestRandK(unittest.TestCase):
    def test_requires_stream(self):
        with self.assertRaises(CompressionError):
            RandK(5, 2).compress(np.ones(5))

    def test_same_stream_same_output(self):
        x = np.arange(1.0, 11.0)
        a = RandK(10, 3).compress(x, np.random.default_rng(3)).output
        b = RandK(10, 3).compress(x, np.random.default_rng(3)).output
        np.testing.assert_array_equal(a, b)

    def test_keeps_k_unscaled_coordinates(self):
        x = np.arange(1.0, 11.0)
        out = RandK(10, 3).compress(x, np.random.default_rng(5)).output
        kept = np.flatnonzero(out)
        self.assertEqual(len(kept), 3)
        np.testing.assert_array_equal(out[kept], x[kept])

    def test_contractive_in_mean(self):
        rng = np.random.default_rng(7)
        compressor = RandK(50, 5)
        vectors = [rng.standard_normal(50) for _ in range(3)]
        estimate = estimate_contraction_detailed(compressor, vectors, 2000, rng)
        self.assertLessEqual(estimate.ratio, 0.9 + 3 * estimate.standard_error)


class TestIdentityAndRepeated(unittest.TestCase):
    def test_identity_exact(self):
        x = np.array([1.5, -2.5, 0.0])
        result = Identity(3).compress(x)
        np.testing.assert_array_equal(result.output, x)
        self.assertEqual(result.transmitted_scalars, 3)
        self.assertEqual(result.transmitted_indices, 0)
        self.assertEqual(Identity(3).contraction_parameter(), 1.0)

    def test_repeated_reconstructs_after_d_over_k_rounds(self):
        rng = np.random.default_rng(1)
        d, k = 12, 5
        rounds = rounds_for_exact_reconstruction(d, k)
        self.assertEqual(rounds, 3)
        compressor = Repeated(TopK(d, k), rounds)
        for _ in range(20):
            x = rng.standard_normal(d)
            result = compressor(x)
            np.testing.assert_array_equal(result.output, x)
            self.assertEqual(result.transmitted_scalars, rounds * k)

    def test_repeated_delta(self):
        compressor = Repeated(TopK(10, 1), 3)
        self.assertAlmostEqual(compressor.contraction_parameter(), 1.0 - 0.9 ** 3)
        self.assertEqual(compressor.messages_per_call, 3)

    def test_repeated_rejects_absolute_base(self):
        with self.assertRaises(CompressionError):
            Repeated(AbsoluteRound(3, 0.1), 2)

    def test_repeated_rejects_zero_rounds(self):
        with self.assertRaises(CompressionError):
            Repeated(TopK(3, 1), 0)


class TestAbsolute(unittest.TestCase):
    def test_round_error_bound(self):
        rng = np.random.default_rng(2)
        compressor = AbsoluteRound(20, 0.1)
        self.assertAlmostEqual(compressor.error_bound_sq(), 20 * 0.01 / 4)
        for _ in range(50):
            x = 3.0 * rng.standard_normal(20)
            self.assertLessEqual(_sq(compressor(x).output - x), compressor.error_bound_sq() + 1e-12)

    def test_threshold(self):
        compressor = AbsoluteThreshold(4, 0.5)
        out = compressor(np.array([0.4, -0.6, 0.5, 2.0])).output
        np.testing.assert_array_equal(out, [0.0, -0.6, 0.0, 2.0])
        self.assertAlmostEqual(compressor.contraction_parameter(), 2.0 * 0.5)

    def test_zero_threshold_is_lossless(self):
        x = np.array([1e-9, -3.0])
        np.testing.assert_array_equal(AbsoluteThreshold(2, 0.0)(x).output, x)

    def test_absolute_costs_dense(self):
        result = AbsoluteRound(6, 1.0).compress(np.ones(6))
        self.assertEqual((result.transmitted_scalars, result.transmitted_indices), (6, 0))


class TestInputChecks(unittest.TestCase):
    def test_dimension_mismatch(self):
        with self.assertRaises(CompressionError):
            TopK(4, 1).compress(np.ones(3))

    @parameterized.expand([(float("nan"),), (float("inf"),)])
    def test_non_finite_input(self, bad):
        with self.assertRaises(NonFiniteInputError):
            Identity(2).compress(np.array([1.0, bad]))


class TestBuildCompressor(unittest.TestCase):
    def test_spec_round_trip(self):
        for block in (
            {"kind": "topk", "k": 2},
            {"kind": "randk", "k": 3},
            {"kind": "identity"},
            {"kind": "repeated", "base": {"kind": "topk", "k": 1}, "rounds": 4},
            {"kind": "absolute_round", "step": 0.25},
            {"kind": "absolute_threshold", "threshold": 0.1},
        ):
            self.assertEqual(build_compressor(block, 5).describe(), block)

    def test_unknown_kind(self):
        with self.assertRaisesRegex(CompressionError, "not supported"):
            build_compressor({"kind": "qsgd"}, 5)

    def test_missing_field(self):
        with self.assertRaisesRegex(CompressionError, "missing field"):
            build_compressor({"kind": "topk"}, 5)

    def test_module_helpers(self):
        out = compress({"kind": "topk", "k": 1}, np.array([1.0, -4.0, 2.0]))
        np.testing.assert_array_equal(out.output, [0.0, -4.0, 0.0])
        self.assertEqual(contraction_parameter({"kind": "topk", "k": 2}, 8), 0.25)
        self.assertAlmostEqual(
            contraction_parameter({"kind": "absolute_round", "step": 1.0}, 4), math.sqrt(4 / 4)
        )


class TestEstimateContraction(unittest.TestCase):
    def test_lossless_estimate_is_zero(self):
        rng = np.random.default_rng(0)
        vectors = [rng.standard_normal(6) for _ in range(4)]
        self.assertEqual(estimate_contraction(TopK(6, 6), vectors, 3, rng), 0.0)

    def test_topk_estimate_below_bound(self):
        rng = np.random.default_rng(0)
        vectors = [rng.standard_normal(10) for _ in range(10)]
        self.assertLessEqual(estimate_contraction(TopK(10, 2), vectors, 1, rng), 0.8)

    def test_zero_trial_vector_rejected(self):
        with self.assertRaises(CompressionError):
            estimate_contraction(TopK(3, 1), [np.zeros(3)], 1, np.random.default_rng(0))
