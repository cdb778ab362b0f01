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

from compressed_opt.algorithms import (
    ADEF,
    AbsoluteAcc,
    AcceleratedSGD,
    ErrorFeedback,
    Neolithic,
    VanillaAccEF,
    acc_step,
    accelerated_round,
    average_messages,
    begin_round,
    build_method,
    initial_state,
    neolithic_round,
)
from compressed_opt.compressors import AbsoluteRound, CompressionError, Identity, RandK, TopK
from compressed_opt.diagnostics import error_identity_residuals
from compressed_opt.learning_rates import ConstantSchedule, CustomSchedule, ExperimentGammaSchedule
from compressed_opt.problems import GaussianOracle, generate_synthetic_logistic, isotropic_quadratic
from compressed_opt.random import RandomStreams


def run_rounds(method, oracle, x0, rounds, seed=0):
    streams = RandomStreams(seed)
    server, clients, setup = method.init_state(x0, oracle, streams)
    trace = []
    for _ in range(rounds):
        server, clients, record = method.round(server, clients, oracle, streams)
        trace.append(record)
    return server, clients, setup, trace


def logistic_oracle(sigma2=0.0, n=4, d=10):
    problem = generate_synthetic_logistic(n, d, 20, heterogeneity=0.5, seed=0)
    return GaussianOracle(problem, sigma2=sigma2)


class TestAverageMessages(unittest.TestCase):
    def test_ascending_order_sum(self):
        vectors = [np.array([1e16]), np.array([1.0]), np.array([-1e16])]
        # (0 + 1e16 + 1) - 1e16 loses the 1 in float64
        np.testing.assert_array_equal(average_messages(vectors), [0.0])


class TestHandTrace(unittest.TestCase):
    """One vanilla round on f(x) = 1/2 ||x||^2 worked out by hand."""

    def test_vanilla_round(self):
        oracle = GaussianOracle(isotropic_quadratic(np.zeros(2)))
        schedule = CustomSchedule([1.0, 1.0], A0=1.0)
        method = VanillaAccEF(TopK(2, 1), schedule)
        server, clients, _, trace = run_rounds(method, oracle, np.array([2.0, 1.0]), 1)
        record = trace[0]
        # y = (1*x + 1*v)/2 = x since v0 = x0; g = y
        np.testing.assert_array_equal(record.y, [2.0, 1.0])
        np.testing.assert_array_equal(record.ghat, [2.0, 0.0])
        np.testing.assert_array_equal(clients[0].e, [0.0, 1.0])
        # v1 = v0 - a ghat, x1 = (A0 x0 + a v1) / A1
        np.testing.assert_array_equal(server.v, [0.0, 1.0])
        np.testing.assert_array_equal(server.x, [1.0, 1.0])
        self.assertEqual(record.A, 2.0)
        self.assertEqual((record.comm_scalars, record.comm_indices, record.messages), (1, 1, 1))

    def test_ef_round(self):
        oracle = GaussianOracle(isotropic_quadratic(np.zeros(2)))
        method = ErrorFeedback(TopK(2, 1), ConstantSchedule(0.5))
        server, clients, _, trace = run_rounds(method, oracle, np.array([4.0, 2.0]), 2)
        # round 0: p = C(0.5 g) = [2, 0], e = [0, 1], x = [2, 2]
        # round 1: e + 0.5 g = [1, 2], p = [0, 2], e = [1, 0], x = [2, 0]
        np.testing.assert_array_equal(server.x, [2.0, 0.0])
        np.testing.assert_array_equal(clients[0].e, [1.0, 0.0])
        np.testing.assert_array_equal(trace[1].ghat, [0.0, 4.0])


class TestErrorIdentity(unittest.TestCase):
    @parameterized.expand(
        [
            ("adef", 0.0),
            ("adef", 1.0),
            ("vanilla", 0.0),
            ("vanilla", 1.0),
        ]
    )
    def test_average_error_equals_accumulated_error(self, kind, sigma2):
        oracle = logistic_oracle(sigma2)
        schedule = ExperimentGammaSchedule(0.05, 0.1)
        method = build_method(kind, TopK(10, 1), schedule)
        _, _, _, trace = run_rounds(method, oracle, np.zeros(10), 200, seed=11)
        self.assertLessEqual(float(error_identity_residuals(trace).max()), 1e-9)

    def test_randk_error_identity(self):
        oracle = logistic_oracle(0.5)
        method = build_method("adef", RandK(10, 2), ExperimentGammaSchedule(0.05, 0.2))
        _, _, _, trace = run_rounds(method, oracle, np.zeros(10), 100, seed=2)
        self.assertLessEqual(float(error_identity_residuals(trace).max()), 1e-9)


class TestLosslessReduction(unittest.TestCase):
    def setUp(self):
        self.oracle = logistic_oracle(sigma2=1.0)
        self.schedule = ExperimentGammaSchedule(0.01, 1.0)
        self.x0 = np.zeros(10)
        baseline = AcceleratedSGD(Identity(10), self.schedule)
        _, _, _, self.expected = run_rounds(baseline, self.oracle, self.x0, 500, seed=5)

    def _gap(self, method):
        _, _, _, trace = run_rounds(method, self.oracle, self.x0, 500, seed=5)
        return max(float(np.max(np.abs(a.x_next - b.x_next))) for a, b in zip(trace, self.expected))

    def test_vanilla_bit_exact(self):
        self.assertEqual(self._gap(VanillaAccEF(Identity(10), self.schedule)), 0.0)

    def test_neolithic_bit_exact(self):
        self.assertEqual(self._gap(Neolithic(Identity(10), self.schedule, rounds=3)), 0.0)

    def test_neolithic_reconstructing_topk_bit_exact(self):
        self.assertEqual(self._gap(Neolithic(TopK(10, 4), self.schedule, rounds=3)), 0.0)

    def test_adef_matches(self):
        self.assertLessEqual(self._gap(ADEF(Identity(10), self.schedule)), 1e-12)

    def test_identity_keeps_error_zero(self):
        _, clients, _, trace = run_rounds(VanillaAccEF(Identity(10), self.schedule), self.oracle, self.x0, 20)
        for client in clients:
            np.testing.assert_array_equal(client.e, np.zeros(10))
        np.testing.assert_array_equal(trace[-1].ghat, trace[-1].gbar)


class TestADEF(unittest.TestCase):
    def test_setup_cost_and_messages(self):
        oracle = logistic_oracle()
        method = ADEF(TopK(10, 2), ExperimentGammaSchedule(0.05, 0.2))
        _, _, setup, trace = run_rounds(method, oracle, np.zeros(10), 3)
        self.assertEqual((setup.scalars, setup.indices, setup.messages), (40, 0, 4))
        for record in trace:
            self.assertEqual(record.messages, 8)
            self.assertEqual(record.comm_scalars, 16)
            self.assertEqual(record.comm_indices, 16)

    def test_server_tracks_client_control_variates(self):
        oracle = logistic_oracle(sigma2=0.5)
        method = ADEF(TopK(10, 1), ExperimentGammaSchedule(0.05, 0.1))
        _, _, _, trace = run_rounds(method, oracle, np.zeros(10), 50)
        self.assertLessEqual(max(r.g_tilde_gap for r in trace), 1e-12)

    def test_control_variate_settles_without_noise(self):
        oracle = logistic_oracle()
        method = ADEF(Identity(10), ExperimentGammaSchedule(0.05, 1.0))
        _, _, _, trace = run_rounds(method, oracle, np.zeros(10), 5)
        for record in trace:
            self.assertLessEqual(record.h, 1e-24)

    def test_snapshots(self):
        oracle = logistic_oracle()
        method = ADEF(TopK(10, 1), ExperimentGammaSchedule(0.05, 0.1), snapshots=True)
        _, _, _, trace = run_rounds(method, oracle, np.zeros(10), 1)
        self.assertEqual(len(trace[0].clients), 4)
        self.assertEqual(
            set(trace[0].clients[0]), {"g", "delta_cv", "Delta_cv", "g_tilde", "delta", "Delta", "e_next"}
        )

    def test_rejects_absolute_compressor(self):
        with self.assertRaises(CompressionError):
            ADEF(AbsoluteRound(10, 0.1), ExperimentGammaSchedule(0.05, 0.1))


class TestOtherMethods(unittest.TestCase):
    def test_absolute_requires_absolute_compressor(self):
        with self.assertRaises(CompressionError):
            AbsoluteAcc(TopK(3, 1), CustomSchedule([1.0]))

    def test_absolute_round_costs(self):
        oracle = logistic_oracle()
        method = AbsoluteAcc(AbsoluteRound(10, 0.01), CustomSchedule([0.1] * 3, A0=1.0))
        _, _, _, trace = run_rounds(method, oracle, np.zeros(10), 3)
        self.assertEqual(trace[0].comm_scalars, 40)
        self.assertIsNone(trace[0].error_mean)

    def test_neolithic_counts_repetitions(self):
        oracle = logistic_oracle()
        method = Neolithic(TopK(10, 2), ExperimentGammaSchedule(0.05, 0.2), rounds=3)
        _, _, _, trace = run_rounds(method, oracle, np.zeros(10), 1)
        self.assertEqual(trace[0].messages, 12)
        self.assertEqual(trace[0].comm_scalars, 4 * 3 * 2)

    def test_build_method_unknown(self):
        with self.assertRaisesRegex(ValueError, "not supported"):
            build_method("sgd", TopK(3, 1), CustomSchedule([1.0]))

    def test_same_seed_same_trajectory(self):
        oracle = logistic_oracle(sigma2=1.0)
        method = build_method("adef", RandK(10, 3), ExperimentGammaSchedule(0.05, 0.3))
        a = run_rounds(method, oracle, np.zeros(10), 30, seed=4)[0]
        b = run_rounds(method, oracle, np.zeros(10), 30, seed=4)[0]
        c = run_rounds(method, oracle, np.zeros(10), 30, seed=5)[0]
        np.testing.assert_array_equal(a.x, b.x)
        self.assertFalse(np.array_equal(a.x, c.x))


class TestAccStep(unittest.TestCase):
    def test_single_step(self):
        schedule = CustomSchedule([1.0], A0=1.0)
        server = initial_state([1.0, 2.0], v0=[3.0, 4.0], A0=schedule.A0)
        a, A_next, y = begin_round(server, schedule)
        self.assertEqual((a, A_next), (1.0, 2.0))
        np.testing.assert_array_equal(y, [2.0, 3.0])
        new = acc_step(server.replace(y=y), schedule, np.array([1.0, 1.0]))
        np.testing.assert_array_equal(new.v, [2.0, 3.0])
        np.testing.assert_array_equal(new.x, [1.5, 2.5])
        self.assertEqual((new.A, new.t), (2.0, 1))

    @parameterized.expand([(0, 0.0), (1, 1.3), (2, 40.0)])
    def test_x_minus_y_follows_v(self, seed, A0):
        rng = np.random.default_rng(seed)
        schedule = CustomSchedule([0.7], A0=A0)
        server = initial_state(rng.standard_normal(5), v0=rng.standard_normal(5), A0=A0)
        a, A_next, y = begin_round(server, schedule)
        new = acc_step(server.replace(y=y), schedule, rng.standard_normal(5))
        np.testing.assert_allclose(new.x - y, (a / A_next) * (new.v - server.v), rtol=0, atol=1e-12)


class TestADEFHandTrace(unittest.TestCase):
    """Two ADEF rounds with one client on f(x) = 1/2 ||x||^2, TopK(1) in d = 2."""

    def setUp(self):
        oracle = GaussianOracle(isotropic_quadratic(np.zeros(2)))
        method = ADEF(TopK(2, 1), CustomSchedule([1.0, 2.0], A0=1.0), snapshots=True)
        self.server, self.clients, self.setup, self.trace = run_rounds(method, oracle, np.array([2.0, 1.0]), 2)

    def test_setup_sends_uncompressed_gradient(self):
        self.assertEqual((self.setup.scalars, self.setup.indices, self.setup.messages), (2, 0, 1))

    def test_first_round(self):
        record = self.trace[0]
        # y_0 = x_0, the control variate already equals g, both messages are zero
        np.testing.assert_array_equal(record.y, [2.0, 1.0])
        np.testing.assert_array_equal(record.clients[0]["Delta_cv"], [0.0, 0.0])
        np.testing.assert_array_equal(record.clients[0]["Delta"], [0.0, 0.0])
        np.testing.assert_array_equal(record.ghat, [2.0, 1.0])
        np.testing.assert_array_equal(record.v_next, [0.0, 0.0])
        np.testing.assert_array_equal(record.x_next, [1.0, 0.5])
        self.assertEqual(record.h, 0.0)
        self.assertEqual((record.comm_scalars, record.comm_indices, record.messages), (2, 2, 2))

    def test_second_round(self):
        record = self.trace[1]
        details = record.clients[0]
        # a = 2, A = 4: y = (2 x_1 + 2 v_1) / 4
        np.testing.assert_array_equal(record.y, [0.5, 0.25])
        np.testing.assert_array_equal(details["delta_cv"], [-1.5, -0.75])
        np.testing.assert_array_equal(details["Delta_cv"], [-1.5, 0.0])
        np.testing.assert_array_equal(details["g_tilde"], [0.5, 1.0])
        np.testing.assert_array_equal(details["delta"], [0.0, -0.75])
        np.testing.assert_array_equal(details["Delta"], [0.0, -0.75])
        np.testing.assert_array_equal(details["e_next"], [0.0, 0.0])
        np.testing.assert_array_equal(record.ghat, [0.5, 0.25])
        self.assertEqual(record.h, 0.5625)

    def test_final_state(self):
        np.testing.assert_array_equal(self.server.v, [-1.0, -0.5])
        np.testing.assert_array_equal(self.server.x, [0.0, 0.0])
        np.testing.assert_array_equal(self.server.g_tilde, [0.5, 1.0])
        np.testing.assert_array_equal(self.clients[0].g_tilde, [0.5, 1.0])
        self.assertEqual((self.server.A, self.server.t), (4.0, 2))


class TestErrorMemoryBounded(unittest.TestCase):
    @parameterized.expand([("topk", 1), ("topk", 3)])
    def test_ef_error_stays_within_contraction_bound(self, _, k):
        # ||e'|| <= q (||e|| + eta ||g||) with q = sqrt(1 - k/d) gives ||e|| <= q / (1 - q) eta G
        oracle = logistic_oracle(sigma2=1.0)
        eta = 0.1
        method = ErrorFeedback(TopK(10, k), ConstantSchedule(eta), snapshots=True)
        _, _, _, trace = run_rounds(method, oracle, np.zeros(10), 400, seed=3)
        q = np.sqrt(1.0 - k / 10)
        G = max(float(np.linalg.norm(c["g"])) for record in trace for c in record.clients)
        norms = [float(np.linalg.norm(c["e_next"])) for record in trace for c in record.clients]
        self.assertLessEqual(max(norms), q / (1.0 - q) * eta * G * (1.0 + 1e-9))
        # no drift: the second half is no larger than the bound reached in the first
        half = len(norms) // 2
        self.assertLessEqual(max(norms[half:]), 2.0 * max(norms[:half]))


class TestNeolithicSingleRound(unittest.TestCase):
    def test_identity_once_is_accelerated_sgd(self):
        oracle = logistic_oracle(sigma2=1.0)
        schedule = ExperimentGammaSchedule(0.05, 1.0)
        server = initial_state(np.zeros(10), A0=schedule.A0)
        expected = server
        streams_a, streams_b = RandomStreams(7), RandomStreams(7)
        for _ in range(50):
            server, record = neolithic_round(server, oracle, Identity(10), 1, schedule, streams_a)
            expected, _, baseline = accelerated_round(expected, [], oracle, schedule, streams_b)
            np.testing.assert_array_equal(record.ghat, baseline.ghat)
            self.assertEqual(record.comm_scalars, baseline.comm_scalars)
        np.testing.assert_array_equal(server.x, expected.x)
        np.testing.assert_array_equal(server.v, expected.v)
        self.assertEqual(server.A, expected.A)

    def test_method_uses_repeated_base(self):
        method = Neolithic(TopK(10, 2), ExperimentGammaSchedule(0.05, 0.2), rounds=3)
        self.assertEqual((method.compressor.rounds, method.compressor.base.k), (3, 2))
