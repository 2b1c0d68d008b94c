from django.test import TestCase

from app.coarse.steppers import AdaptiveImplicit, BackwardEuler
from app.fine.propagators import EXACT, FineMode
from app.parareal.config import PararealConfig


class TestPararealConfig(TestCase):
    """ Test the `PararealConfig` structure """

    def test_grid(self):
        config = PararealConfig(final_time=10.0, intervals=4)

        self.assertEqual(config.dt, 2.5)
        self.assertEqual(config.times(), [0.0, 2.5, 5.0, 7.5, 10.0])
        self.assertEqual(config.start_time(1), 0.0)
        self.assertEqual(config.start_time(4), 7.5)
        self.assertIsNone(config.window)

    def test_window(self):
        config = PararealConfig(final_time=10.0, intervals=4, fine_mode=FineMode(0.5))

        actual = config.window
        expected = 1.25
        self.assertEqual(actual, expected)

    def test_defaults(self):
        config = PararealConfig(final_time=1.0, intervals=1)

        self.assertEqual(config.max_iterations, 20)
        self.assertEqual(config.residual_tolerance, 1e-3)
        self.assertEqual(config.fine_mode, EXACT)
        self.assertEqual(config.coarse, BackwardEuler())
        self.assertEqual(config.seed, 0)

    def test_invalid(self):
        for values in (
            {'final_time': 0.0, 'intervals': 1},
            {'final_time': 1.0, 'intervals': 0},
            {'final_time': 1.0, 'intervals': 1, 'max_iterations': 0},
            {'final_time': 1.0, 'intervals': 1, 'residual_tolerance': 0.0},
        ):
            with self.assertRaises(ValueError):
                PararealConfig(**values)


class TestFromOptions(TestCase):
    """ Test the `PararealConfig.from_options` method """

    def test_defaults_fill_gaps(self):
        config = PararealConfig.from_options({'final_time': 10, 'intervals': 5, 'seed': None})

        self.assertEqual(config.final_time, 10.0)
        self.assertEqual(config.intervals, 5)
        self.assertEqual(config.max_iterations, 20)
        self.assertEqual(config.seed, 0)
        self.assertEqual(config.fine_mode, EXACT)

    def test_overrides(self):
        config = PararealConfig.from_options({
            'final_time': 10,
            'intervals': 5,
            'coarse': 'adaptive',
            'coarse_rtol': 1e-4,
            'homogenize': 0.5,
            'seed': 42,
        })

        self.assertEqual(config.coarse, AdaptiveImplicit(1e-4, 1e-8))
        self.assertEqual(config.fine_mode, FineMode(0.5))
        self.assertEqual(config.seed, 42)

    def test_to_options(self):
        config = PararealConfig(final_time=10.0, intervals=5, coarse=AdaptiveImplicit(1e-4, 1e-6), seed=3)

        actual = config.to_options()
        expected = {
            'final_time': 10.0,
            'intervals': 5,
            'max_iterations': 20,
            'residual_tolerance': 1e-3,
            'homogenize': None,
            'coarse': 'adaptive',
            'seed': 3,
            'event_cap': None,
            'coarse_rtol': 1e-4,
            'coarse_atol': 1e-6,
        }
        self.assertEqual(actual, expected)
