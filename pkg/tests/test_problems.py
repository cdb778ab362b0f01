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

import unittest

import numpy as np
from parameterized import parameterized

from compressed_opt.problems import (
    GaussianOracle,
    ProblemError,
    ReferenceSolveError,
    bregman,
    full_gradient,
    generate_synthetic_logistic,
    generate_synthetic_quadratic,
    isotropic_quadratic,
    logistic_loss,
    logistic_loss_gradient,
    make_quadratic,
    solve_reference,
    stochastic_gradient,
)


def _numeric_gradient(f, x, eps=1e-6):
    g = np.zeros_like(x)
    for j in range(len(x)):
        step = np.zeros_like(x)
        step[j] = eps
        g[j] = (f(x + step) - f(x - step)) / (2 * eps)
    return g


class TestLogistic(unittest.TestCase):
    def setUp(self):
        self.problem = generate_synthetic_logistic(4, 6, 25, heterogeneity=0.5, seed=3)

    def test_shapes(self):
        self.assertEqual(self.problem.n_clients, 4)
        self.assertEqual(self.problem.dimension, 6)
        for a, b in zip(self.problem.features, self.problem.labels):
            self.assertEqual(a.shape, (25, 6))
            self.assertEqual(b.shape, (25,))

    def test_same_seed_same_data(self):
        other = generate_synthetic_logistic(4, 6, 25, heterogeneity=0.5, seed=3)
        for a, b in zip(self.problem.features, other.features):
            np.testing.assert_array_equal(a, b)

    def test_gradient_matches_finite_differences(self):
        x = np.random.default_rng(0).standard_normal(6)
        for i in range(4):
            expected = _numeric_gradient(lambda z: self.problem.client_value(i, z), x)
            np.testing.assert_allclose(self.problem.client_gradient(i, x), expected, atol=1e-6)

    def test_average_equals_pooled(self):
        x = np.random.default_rng(1).standard_normal(6)
        self.assertAlmostEqual(self.problem.value(x), self.problem.pooled_value(x), places=12)
        np.testing.assert_allclose(full_gradient(self.problem, None, x), self.problem.pooled_gradient(x), atol=1e-12)

    def test_convex_along_segments(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            x, y = rng.standard_normal(6), rng.standard_normal(6)
            t = rng.random()
            lhs = self.problem.value(t * x + (1 - t) * y)
            rhs = t * self.problem.value(x) + (1 - t) * self.problem.value(y)
            self.assertLessEqual(lhs, rhs + 1e-12)

    def test_bregman_nonnegative(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            x, y = rng.standard_normal(6), rng.standard_normal(6)
            self.assertGreaterEqual(bregman(self.problem, x, y), -1e-12)

    def test_smoothness_bounds(self):
        L = self.problem.smoothness()
        self.assertGreater(L, 0.0)
        self.assertGreaterEqual(self.problem.max_client_smoothness(), L - 1e-12)

    def test_single_sample_loss(self):
        a, b = np.array([1.0, 2.0]), 1.0
        x = np.array([0.5, -0.25])
        self.assertAlmostEqual(logistic_loss(a, b, x), np.log(2.0))
        np.testing.assert_allclose(logistic_loss_gradient(a, b, x), -0.5 * a)

    def test_heterogeneity_sorts_labels(self):
        sorted_problem = generate_synthetic_logistic(2, 4, 50, heterogeneity=1.0, seed=0)
        means = [float(b.mean()) for b in sorted_problem.labels]
        self.assertLess(means[0], means[1])

    def test_feature_decay_scales_columns(self):
        plain = generate_synthetic_logistic(1, 3, 10, seed=5)
        decayed = generate_synthetic_logistic(1, 3, 10, seed=5, feature_decay=0.5)
        np.testing.assert_allclose(decayed.features[0], plain.features[0] * np.array([1.0, 0.5, 0.25]))

    @parameterized.expand([(0, 3, 10, 0.0), (2, 3, 10, 1.5), (2, 0, 10, 0.0)])
    def test_rejects_bad_sizes(self, n, d, m, heterogeneity):
        with self.assertRaises(ProblemError):
            generate_synthetic_logistic(n, d, m, heterogeneity=heterogeneity)


class TestQuadratic(unittest.TestCase):
    def test_isotropic_value_and_bregman(self):
        problem = isotropic_quadratic(np.zeros(3))
        x, y = np.array([1.0, 2.0, 2.0]), np.array([0.0, 1.0, 0.0])
        self.assertAlmostEqual(problem.value(x), 4.5)
        self.assertAlmostEqual(bregman(problem, x, y), 0.5 * float((y - x) @ (y - x)))

    def test_make_quadratic_rejects_indefinite(self):
        with self.assertRaises(ProblemError):
            make_quadratic([np.diag([1.0, -1.0])], [np.zeros(2)])

    def test_make_quadratic_rejects_asymmetric(self):
        with self.assertRaises(ProblemError):
            make_quadratic([np.array([[1.0, 1.0], [0.0, 1.0]])], [np.zeros(2)])

    def test_generated_smoothness(self):
        problem = generate_synthetic_quadratic(3, 5, heterogeneity=0.0, eig_min=0.1, eig_max=2.0, seed=1)
        self.assertAlmostEqual(problem.smoothness(), 2.0, places=10)

    def test_dissimilarity_zero_for_identical_clients(self):
        problem = isotropic_quadratic(np.ones(2), n_clients=3)
        self.assertEqual(problem.gradient_dissimilarity([np.zeros(2), np.ones(2) * 4]), 0.0)


class TestOracle(unittest.TestCase):
    def setUp(self):
        self.problem = isotropic_quadratic(np.zeros(4), n_clients=2)

    def test_exact_without_noise(self):
        oracle = GaussianOracle(self.problem)
        x = np.ones(4)
        np.testing.assert_array_equal(stochastic_gradient(oracle, 0, x, None), x)

    def test_variance_matches_sigma2(self):
        oracle = GaussianOracle(self.problem, sigma2=2.0)
        rng = np.random.default_rng(0)
        x = np.zeros(4)
        norms = [float(np.sum(oracle(1, x, rng) ** 2)) for _ in range(20000)]
        self.assertAlmostEqual(np.mean(norms), 2.0, delta=0.1)

    def test_unbiased(self):
        oracle = GaussianOracle(self.problem, sigma2=3.0)
        rng = np.random.default_rng(1)
        x = np.array([1.0, -2.0, 0.5, 3.0])
        draws = np.stack([oracle(0, x, rng) for _ in range(20000)])
        np.testing.assert_allclose(draws.mean(axis=0), self.problem.full_gradient(0, x), atol=0.03)

    def test_batch_size_divides_variance(self):
        oracle = GaussianOracle(self.problem, sigma2=2.0, batch_size=4)
        self.assertEqual(oracle.variance, 0.5)
        rng = np.random.default_rng(2)
        x = np.ones(4)
        gradient = self.problem.full_gradient(0, x)
        norms = [float(np.sum((oracle(0, x, rng) - gradient) ** 2)) for _ in range(20000)]
        self.assertAlmostEqual(np.mean(norms), 0.5, delta=0.025)

    def test_rejects_negative_sigma2(self):
        with self.assertRaises(ProblemError):
            GaussianOracle(self.problem, sigma2=-1.0)


class TestReference(unittest.TestCase):
    def test_quadratic_minimizer(self):
        center = np.array([1.0, -2.0, 0.5])
        solution = solve_reference(isotropic_quadratic(center, scale=3.0), tolerance=1e-12)
        np.testing.assert_allclose(solution.x_star, center, atol=1e-11)
        self.assertLess(abs(solution.f_star), 1e-20)

    def test_logistic_gradient_small(self):
        problem = generate_synthetic_logistic(3, 5, 30, seed=0)
        solution = solve_reference(problem, tolerance=1e-10)
        self.assertLessEqual(np.linalg.norm(problem.full_gradient(None, solution.x_star)), 1e-10)

    def test_iteration_cap(self):
        problem = generate_synthetic_quadratic(1, 20, eig_min=1e-6, eig_max=1.0, seed=0)
        with self.assertRaises(ReferenceSolveError):
            solve_reference(problem, tolerance=1e-14, max_iterations=5)
