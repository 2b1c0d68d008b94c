import math

from django.test import TestCase

from app.exceptions import BoxViolationError
from app.fine.thinning import BoundingBox
from app.kinetics.builtins import build_birth_death, build_pure_birth
from app.kinetics.networks import Reaction, ReactionNetwork
from app.kinetics.propensities import Constant
from app.parareal.config import PararealConfig
from app.parareal.engine import ConvergenceReport
from app.validation.diagnostics import (
    convergence_curve_diagnostic, jump_bound_check, omega_scaling_study, perturbation_noise_floor, replicate,
    switch_times,
)


class TestReplicate(TestCase):
    """ Test the `replicate` method """

    def test_threads_keep_order(self):
        actual = replicate(lambda i: i * i, 20, threads=4)
        expected = [i * i for i in range(20)]
        self.assertEqual(actual, expected)


class TestJumpBoundCheck(TestCase):
    """ Test the `jump_bound_check` method """

    def test_pure_birth_is_tight(self):
        """
        Test the compensated jump term of a constant channel has variance exactly `W t`.
        """
        report = jump_bound_check(
            build_pure_birth(5.0), [0.0], 1.0, 2000, 5.0, BoundingBox((0,), (100,)), two_sided=True,
        )

        self.assertEqual(report.bound, 5.0)
        self.assertTrue(report.passed)

    def test_birth_death_one_sided(self):
        report = jump_bound_check(
            build_birth_death(birth=5.0, death=1.0), [5.0], 1.0, 500, 45.0, BoundingBox((0,), (40,)),
        )

        self.assertAlmostEqual(report.bound, 90.0, places=10)
        self.assertLess(report.estimate, report.bound)
        self.assertTrue(report.passed)

    def test_frobenius_norm(self):
        """
        Test two independent inflows use `|N|^2 = 2` where the spectral norm would give 1.
        """
        net = ReactionNetwork(('A', 'B'), (
            Reaction(Constant(2.0), (-1, 0)),
            Reaction(Constant(2.0), (0, -1)),
        ))
        report = jump_bound_check(net, [0.0, 0.0], 1.0, 50, 4.0, BoundingBox((0, 0), (100, 100)))

        actual = report.bound
        expected = 8.0
        self.assertAlmostEqual(actual, expected, places=12)

    def test_path_leaving_the_box(self):
        with self.assertRaises(BoxViolationError):
            jump_bound_check(build_pure_birth(50.0), [0.0], 10.0, 5, 50.0, BoundingBox((0,), (3,)))

    def test_too_few_replicas(self):
        with self.assertRaises(ValueError):
            jump_bound_check(build_birth_death(), [0.0], 1.0, 1, 45.0, BoundingBox((0,), (40,)))


class TestOmegaScalingStudy(TestCase):
    """ Test the `omega_scaling_study` method """

    def test_too_few_sizes(self):
        with self.assertRaises(ValueError):
            omega_scaling_study(lambda omega: (build_birth_death(), [0.0]), 1.0, [10.0, 100.0], 5)

    def test_no_noise(self):
        inert = ReactionNetwork(('A',), ())
        report = omega_scaling_study(lambda omega: (inert, [omega]), 1.0, [10.0, 100.0, 1000.0], 3)

        self.assertFalse(report.applicable)
        self.assertIsNone(report.slope)
        self.assertEqual(report.rms, (0.0, 0.0, 0.0))


class TestConvergenceCurveDiagnostic(TestCase):
    """ Test the `convergence_curve_diagnostic` method """

    def test_ratios(self):
        report = ConvergenceReport(3, [0.1, 0.05, 0.0125], None, 'K_max')
        frame = convergence_curve_diagnostic(report)

        self.assertEqual(frame['iteration'].tolist(), [1, 2, 3])
        self.assertTrue(math.isnan(frame['ratio'][0]))
        self.assertEqual(frame['ratio'].tolist()[1:], [0.5, 0.25])


class TestPerturbationNoiseFloor(TestCase):
    """ Test the `perturbation_noise_floor` method """

    def test_floor_is_a_relative_error(self):
        config = PararealConfig(final_time=2.0, intervals=2, seed=1)

        actual = perturbation_noise_floor(build_birth_death(), [5.0], config)
        self.assertGreaterEqual(actual, 0.0)
        self.assertTrue(math.isfinite(actual))

    def test_invalid_fraction(self):
        with self.assertRaises(ValueError):
            perturbation_noise_floor(build_birth_death(), [5.0], PararealConfig(final_time=1.0, intervals=1), 1.5)


class TestSwitchTimes(TestCase):
    """ Test the `switch_times` method """

    def test_dominance_changes(self):
        times = [0.0, 1.0, 2.0, 3.0, 4.0]
        states = [(10, 0), (5, 5), (0, 10), (1, 0), (0, 0)]

        actual = switch_times(times, states)
        expected = [2.0, 3.0]
        self.assertEqual(actual, expected)

    def test_band(self):
        actual = switch_times([0.0, 1.0, 2.0], [(10, 0), (4, 6), (0, 10)], band=3)
        expected = [2.0]
        self.assertEqual(actual, expected)
