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

from parameterized import parameterized

from compressed_opt.algorithms import ProblemConstants, neolithic_rounds, theorem_branches, theorem_M
from compressed_opt.config import ScheduleConfig
from compressed_opt.learning_rates import (
    ConstantSchedule,
    CustomSchedule,
    ExperimentGammaSchedule,
    ScheduleError,
    TheoremADEFSchedule,
    TheoremAbsoluteSchedule,
    TheoremVanillaSchedule,
    build_step_schedule,
)


class TestSchedules(unittest.TestCase):
    def test_experiment_gamma(self):
        schedule = ExperimentGammaSchedule(0.05, 0.1)
        self.assertAlmostEqual(schedule.A0, 100.0)
        self.assertAlmostEqual(schedule.get_a(1), 0.55)
        self.assertAlmostEqual(schedule.get_A(2), 100.0 + 0.55 + 0.6)

    def test_theorem_adef(self):
        schedule = TheoremADEFSchedule(M=1000.0, delta=0.5)
        self.assertAlmostEqual(schedule.get_a(1), 65.0 / 1000.0)
        self.assertAlmostEqual(schedule.A0, 32.0 ** 2 / (2 * 0.25 * 1000.0))

    def test_theorem_vanilla(self):
        schedule = TheoremVanillaSchedule(M=10.0, delta=0.5)
        self.assertAlmostEqual(schedule.get_a(2), 1.0)
        self.assertAlmostEqual(schedule.A0, 8.0 / (0.25 * 10.0))

    def test_theorem_absolute_starts_from_zero(self):
        schedule = TheoremAbsoluteSchedule(M=4.0)
        self.assertEqual(schedule.A0, 0.0)
        self.assertEqual([a for a, _ in schedule.weights(3)], [0.25, 0.5, 0.75])

    def test_weights_accumulate(self):
        schedule = CustomSchedule([1.0, 2.0, 3.0], A0=0.5)
        self.assertEqual(schedule.weights(3), [(1.0, 1.5), (2.0, 3.5), (3.0, 6.5)])

    def test_validate_rejects_tiny_step(self):
        with self.assertRaises(ScheduleError):
            CustomSchedule([1.0, 1e-13]).validate(2)

    def test_custom_too_short(self):
        with self.assertRaises(ScheduleError):
            CustomSchedule([1.0]).get_a(2)

    @parameterized.expand([(0.0,), (1.5,)])
    def test_rejects_bad_delta(self, delta):
        with self.assertRaises(ScheduleError):
            ExperimentGammaSchedule(0.1, delta)

    def test_constant(self):
        schedule = ConstantSchedule(0.3)
        self.assertEqual(schedule.get_a(7), 0.3)
        self.assertEqual(schedule.state_dict(), {"kind": "constant", "A0": 0.0, "eta": 0.3})


class TestBuildStepSchedule(unittest.TestCase):
    def test_delta_comes_from_compressor(self):
        schedule = build_step_schedule(ScheduleConfig(kind="experiment_gamma", gamma=0.1), delta=0.2)
        self.assertEqual(schedule.delta, 0.2)

    def test_configured_delta_wins(self):
        schedule = build_step_schedule(ScheduleConfig(kind="experiment_gamma", gamma=0.1, delta=0.5), delta=0.2)
        self.assertEqual(schedule.delta, 0.5)

    def test_theory_needs_M(self):
        with self.assertRaises(ScheduleError):
            build_step_schedule(ScheduleConfig(kind="theorem_absolute"))
        schedule = build_step_schedule(ScheduleConfig(kind="theorem_absolute"), M=8.0)
        self.assertEqual(schedule.get_a(2), 0.25)


class TestTheory(unittest.TestCase):
    def setUp(self):
        self.constants = ProblemConstants(L=1.0, ell=2.0, sigma2=0.0, n=4, R0_sq=1.0)

    def test_deterministic_adef_branch(self):
        self.assertEqual(theorem_M("adef", self.constants, 0.5, 100), 2.0 ** 13 * 2.0 / 0.5 ** 4)

    def test_deterministic_vanilla_branch(self):
        self.assertAlmostEqual(theorem_M("vanilla", self.constants, 0.5, 100), 40.0 * (100 + 8.0) / 0.5)

    def test_noise_branch_grows_with_T(self):
        noisy = ProblemConstants(L=1.0, ell=1.0, sigma2=1.0, n=4, R0_sq=1.0)
        branches = theorem_branches("absolute", noisy, None, 10 ** 6)
        self.assertAlmostEqual(branches[1], math.sqrt(4.0 * 1e18 / 4.0))
        self.assertEqual(theorem_M("absolute", noisy, None, 10 ** 6), max(branches))

    def test_absolute_error_branch(self):
        constants = ProblemConstants(L=1.0, ell=1.0, sigma2=0.0, n=1, R0_sq=1.0, Delta=1.0)
        branches = theorem_branches("absolute", constants, None, 2)
        self.assertAlmostEqual(branches[2], (2.0 * 18 * 32) ** (1.0 / 3.0))

    def test_neolithic_branch(self):
        self.assertEqual(theorem_M("neolithic", self.constants, None, 50), 24.0)

    def test_rejects_zero_rounds(self):
        with self.assertRaises(ScheduleError):
            theorem_M("adef", self.constants, 0.5, 0)

    def test_rejects_zero_radius_with_noise(self):
        constants = ProblemConstants(L=1.0, ell=1.0, sigma2=1.0, n=1, R0_sq=0.0)
        with self.assertRaises(ScheduleError):
            theorem_M("adef", constants, 0.5, 10)

    def test_neolithic_rounds(self):
        expected = math.ceil(max(4 / 0.5 * math.log(100), math.log(4 * 4 * 100 ** 2 / 3) / 0.5))
        self.assertEqual(neolithic_rounds(0.5, 4, 100), expected)
        self.assertEqual(neolithic_rounds(1.0, 1, 1), 1)
